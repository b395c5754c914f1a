#include "gramcov/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gramcov {

namespace {

constexpr double kVarianceEps = 1e-4;
constexpr double kUnitNormTol = 1e-6;

void require_min_samples(const Matrix& K, Index n) {
    if (K.cols() < n) {
        throw InvalidArgument("criterion requires at least " + std::to_string(n) + " samples");
    }
}

void require_unit_columns(const Matrix& K, const char* who) {
    for (Index i = 0; i < K.cols(); ++i) {
        if (std::abs(K.col(i).norm() - 1.0) > kUnitNormTol) {
            throw NotNormalized(std::string(who) + ": column " + std::to_string(i) +
                                " is not unit norm");
        }
    }
}

/// Unbiased per-row variances.
Vector row_variances(const Matrix& K) {
    const Index n = K.cols();
    Matrix centered = K.colwise() - K.rowwise().mean();
    return centered.rowwise().squaredNorm() / static_cast<double>(n - 1);
}

}  // namespace

void VicregWeights::validate() const {
    if (!(invariance >= 0.0) || !(variance >= 0.0) || !(covariance >= 0.0) ||
        !std::isfinite(invariance) || !std::isfinite(variance) || !std::isfinite(covariance)) {
        throw InvalidArgument("criterion weights must be finite and non-negative");
    }
}

double l_c(const Matrix& K) { return offdiag_sq_frobenius(gram(K)); }

double l_nc(const Matrix& K) { return offdiag_sq_frobenius(covariance_raw(K)); }

double invariance_mse(const Matrix& K, const Matrix& Kp) {
    require_same_shape(K, Kp);
    return (K - Kp).squaredNorm() / static_cast<double>(K.size());
}

double variance_hinge(const Matrix& K) {
    validate_embedding(K);
    require_min_samples(K, 2);
    const Vector var = row_variances(K);
    double total = 0.0;
    for (Index j = 0; j < var.size(); ++j) {
        total += std::max(0.0, 1.0 - std::sqrt(var(j) + kVarianceEps));
    }
    return total / static_cast<double>(K.rows());
}

double covariance_c(const Matrix& K) { return offdiag_sq_frobenius(covariance_sample(K)); }

double c_exp(const Matrix& K, double tau) {
    if (tau <= 0.0) throw InvalidArgument("temperature must be positive");
    if (K.rows() < 2) throw InvalidArgument("c_exp requires at least two dimensions");
    const Matrix C = covariance_sample(K);
    const Index m = C.rows();
    double total = 0.0;
    std::vector<double> row;
    row.reserve(static_cast<size_t>(m - 1));
    for (Index i = 0; i < m; ++i) {
        row.clear();
        for (Index j = 0; j < m; ++j) {
            if (j != i) row.push_back(C(i, j) / tau);
        }
        total += detail::logsumexp(row);
    }
    return total / static_cast<double>(m);
}

double l_reg(const Matrix& K) { return col_norm_pow4_sum(K) - row_norm_pow4_sum(K); }

namespace {

LossValue combine(const VicregWeights& w, double inv, double var, double cov) {
    LossValue out;
    out.breakdown["invariance"] = inv;
    out.breakdown["variance"] = var;
    out.breakdown["covariance"] = cov;
    out.value = w.invariance * inv + w.variance * var + w.covariance * cov;
    return out;
}

}  // namespace

LossValue vicreg(const Matrix& K, const Matrix& Kp, const VicregWeights& w) {
    w.validate();
    require_same_shape(K, Kp);
    return combine(w, invariance_mse(K, Kp), variance_hinge(K) + variance_hinge(Kp),
                   covariance_c(K) + covariance_c(Kp));
}

LossValue vicreg_exp(const Matrix& K, const Matrix& Kp, const VicregWeights& w, double tau) {
    w.validate();
    require_same_shape(K, Kp);
    return combine(w, invariance_mse(K, Kp), variance_hinge(K) + variance_hinge(Kp),
                   c_exp(K, tau) + c_exp(Kp, tau));
}

LossValue vicreg_ctr(const Matrix& K, const Matrix& Kp, const VicregWeights& w, double tau) {
    w.validate();
    require_same_shape(K, Kp);
    if (K.rows() < 2) throw InvalidArgument("vicreg_ctr requires at least two dimensions");
    require_min_samples(K, 2);
    const Matrix Kt = K.transpose();
    const Matrix Kpt = Kp.transpose();
    return combine(w, invariance_mse(K, Kp), variance_hinge(Kt) + variance_hinge(Kpt),
                   c_exp(Kt, tau) + c_exp(Kpt, tau));
}

namespace {

/// Centered and 1/sqrt(N-1)-scaled matrix used by the Gram-route rewrite.
Matrix rewrite_hat(const Matrix& K) {
    const Matrix centered = K.colwise() - K.rowwise().mean();
    return centered / std::sqrt(static_cast<double>(K.cols() - 1));
}

}  // namespace

LossValue vicreg_contrastive_rewrite(const Matrix& K, const Matrix& Kp, const VicregWeights& w) {
    w.validate();
    require_same_shape(K, Kp);
    require_min_samples(K, 2);
    const Matrix hat = rewrite_hat(K);
    const Matrix hat_p = rewrite_hat(Kp);
    const double cov = (l_c(hat) + l_reg(hat)) + (l_c(hat_p) + l_reg(hat_p));
    return combine(w, invariance_mse(K, Kp), variance_hinge(K) + variance_hinge(Kp), cov);
}

double simclr_infonce(const Matrix& K, const Matrix& Kp, double tau, SimilarityTransform f) {
    require_same_shape(K, Kp);
    require_min_samples(K, 2);
    require_unit_columns(K, "simclr");
    require_unit_columns(Kp, "simclr");
    return detail::infonce(K, Kp, tau, f, /*include_positive=*/true,
                           /*two_branch_negatives=*/false);
}

double dcl(const Matrix& K, const Matrix& Kp, double tau, SimilarityTransform f) {
    require_same_shape(K, Kp);
    require_min_samples(K, 2);
    require_unit_columns(K, "dcl");
    require_unit_columns(Kp, "dcl");
    return detail::infonce(K, Kp, tau, f, /*include_positive=*/false,
                           /*two_branch_negatives=*/false);
}

double spectral_contrastive(const Matrix& K, const Matrix& Kp) {
    require_same_shape(K, Kp);
    double pos = 0.0;
    for (Index i = 0; i < K.cols(); ++i) pos += K.col(i).dot(Kp.col(i));
    return -2.0 * pos + l_c(K);
}

double barlow_twins(const Matrix& K, const Matrix& Kp, double lambda_bt) {
    require_same_shape(K, Kp);
    require_min_samples(K, 2);
    const double n = static_cast<double>(K.cols());
    for (const Matrix* b : {&K, &Kp}) {
        for (Index j = 0; j < b->rows(); ++j) {
            if (std::abs(b->row(j).mean()) > 1e-6) {
                throw NotStandardized("row " + std::to_string(j) + " is not centered");
            }
            const double pop_var = b->row(j).squaredNorm() / n;
            if (std::abs(pop_var - 1.0) > 1e-4) {
                throw NotStandardized("row " + std::to_string(j) + " does not have unit variance");
            }
        }
    }
    return detail::barlow_core(K, Kp, lambda_bt);
}

double tcr(const Matrix& K, double alpha) {
    validate_embedding(K);
    if (alpha <= 0.0) throw InvalidArgument("alpha must be positive");
    require_unit_columns(K, "tcr");
    return detail::tcr_core(K, alpha);
}

// --- registry -----------------------------------------------------------

namespace {

const std::vector<LossInfo> kLossTable = {
    {"vicreg", true, false, InputTransform::None, SimilarityTransform::Identity},
    {"vicreg-exp", true, true, InputTransform::None, SimilarityTransform::Identity},
    {"vicreg-ctr", true, true, InputTransform::None, SimilarityTransform::Identity},
    {"vicreg-ctr-rewrite", true, false, InputTransform::None, SimilarityTransform::Identity},
    {"simclr", true, true, InputTransform::L2Columns, SimilarityTransform::Identity},
    {"simclr-abs", true, true, InputTransform::L2Columns, SimilarityTransform::Absolute},
    {"simclr-sq", true, true, InputTransform::L2Columns, SimilarityTransform::Square},
    {"dcl", true, true, InputTransform::L2Columns, SimilarityTransform::Identity},
    {"dcl-abs", true, true, InputTransform::L2Columns, SimilarityTransform::Absolute},
    {"dcl-sq", true, true, InputTransform::L2Columns, SimilarityTransform::Square},
    {"scl", true, false, InputTransform::None, SimilarityTransform::Identity},
    {"barlow-twins", true, false, InputTransform::BtStandardize, SimilarityTransform::Identity},
    {"tcr", false, false, InputTransform::L2Columns, SimilarityTransform::Identity},
};

}  // namespace

const LossInfo& loss_info(const std::string& id) {
    for (const auto& info : kLossTable) {
        if (info.id == id) return info;
    }
    throw UnknownLoss("unknown loss id: " + id);
}

const std::vector<std::string>& loss_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> out;
        for (const auto& info : kLossTable) out.push_back(info.id);
        return out;
    }();
    return ids;
}

NormalizationStrategy transform_strategy(InputTransform t, Index M, Index N) {
    NormalizationStrategy s;
    switch (t) {
        case InputTransform::None:
            break;
        case InputTransform::L2Columns:
            s.embedding_norm_target = 1.0;
            break;
        case InputTransform::BtStandardize:
            // zero row mean, population variance 1 <=> row norm sqrt(N)
            s.center_dimensions = true;
            s.dimension_norm_target = std::sqrt(static_cast<double>(N));
            break;
    }
    (void)M;
    return s;
}

LossValue evaluate_core(const std::string& id, const Matrix& K, const Matrix& Kp,
                        const LossParams& params) {
    const LossInfo& info = loss_info(id);
    if (info.two_branch) require_same_shape(K, Kp);

    if (id == "vicreg") return vicreg(K, Kp, params.weights);
    if (id == "vicreg-exp") return vicreg_exp(K, Kp, params.weights, params.tau);
    if (id == "vicreg-ctr") return vicreg_ctr(K, Kp, params.weights, params.tau);
    if (id == "vicreg-ctr-rewrite") return vicreg_contrastive_rewrite(K, Kp, params.weights);

    LossValue out;
    if (id == "scl") {
        out.value = spectral_contrastive(K, Kp);
        out.breakdown["repulsive"] = l_c(K);
        out.breakdown["attractive"] = out.value - out.breakdown["repulsive"];
        return out;
    }
    if (id == "barlow-twins") {
        out.value = detail::barlow_core(K, Kp, params.lambda_bt);
        out.breakdown["total"] = out.value;
        return out;
    }
    if (id == "tcr") {
        out.value = detail::tcr_core(K, params.alpha);
        out.breakdown["total"] = out.value;
        return out;
    }
    // InfoNCE family.
    const bool include_positive = id.rfind("simclr", 0) == 0;
    out.value = detail::infonce(K, Kp, params.tau, info.similarity, include_positive,
                                params.two_branch_negatives);
    out.breakdown["total"] = out.value;
    return out;
}

LossValue evaluate(const std::string& id, const Matrix& K, const Matrix& Kp,
                   const LossParams& params) {
    const LossInfo& info = loss_info(id);
    const NormalizationStrategy strategy = transform_strategy(info.canonical, K.rows(), K.cols());
    const Matrix Z = apply(strategy, K);
    if (!info.two_branch) return evaluate_core(id, Z, Z, params);
    const Matrix Zp = apply(strategy, Kp);
    return evaluate_core(id, Z, Zp, params);
}

namespace detail {

double logsumexp(const std::vector<double>& values) {
    if (values.empty()) throw InvalidArgument("logsumexp over an empty set");
    const double m = *std::max_element(values.begin(), values.end());
    if (!std::isfinite(m)) return m;
    double sum = 0.0;
    for (double v : values) sum += std::exp(v - m);
    return m + std::log(sum);
}

double apply_similarity(SimilarityTransform f, double x) {
    switch (f) {
        case SimilarityTransform::Identity: return x;
        case SimilarityTransform::Absolute: return std::abs(x);
        case SimilarityTransform::Square: return x * x;
    }
    throw InvalidArgument("invalid similarity transform");
}

double similarity_slope(SimilarityTransform f, double x) {
    switch (f) {
        case SimilarityTransform::Identity: return 1.0;
        // Subgradient 0 at the kink.
        case SimilarityTransform::Absolute: return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
        case SimilarityTransform::Square: return 2.0 * x;
    }
    throw InvalidArgument("invalid similarity transform");
}

double infonce(const Matrix& K, const Matrix& Kp, double tau, SimilarityTransform f,
               bool include_positive, bool two_branch_negatives) {
    if (tau <= 0.0) throw InvalidArgument("temperature must be positive");
    const Index n = K.cols();
    const Matrix S = K.transpose() * K;        // within-branch similarities
    const Matrix T = K.transpose() * Kp;       // cross-branch; diagonal holds positives
    double total = 0.0;
    std::vector<double> terms;
    for (Index i = 0; i < n; ++i) {
        terms.clear();
        const double pos = apply_similarity(f, T(i, i)) / tau;
        if (include_positive) terms.push_back(pos);
        for (Index j = 0; j < n; ++j) {
            if (j == i) continue;
            terms.push_back(apply_similarity(f, S(i, j)) / tau);
            if (two_branch_negatives) terms.push_back(apply_similarity(f, T(i, j)) / tau);
        }
        total += -pos + logsumexp(terms);
    }
    return total;
}

double barlow_core(const Matrix& K, const Matrix& Kp, double lambda_bt) {
    const Matrix C = (K * Kp.transpose()) / static_cast<double>(K.cols());
    double diag_term = 0.0;
    for (Index j = 0; j < C.rows(); ++j) {
        const double d = 1.0 - C(j, j);
        diag_term += d * d;
    }
    return diag_term + lambda_bt * offdiag_sq_frobenius(C);
}

double tcr_core(const Matrix& K, double alpha) {
    const Matrix C = K * K.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> es(C, Eigen::EigenvaluesOnly);
    double total = 0.0;
    for (Index i = 0; i < es.eigenvalues().size(); ++i) {
        // C is PSD; clamp round-off negatives.
        const double lambda = std::max(0.0, es.eigenvalues()(i));
        total += std::log1p(alpha * lambda);
    }
    return -0.5 * total;
}

}  // namespace detail

}  // namespace gramcov
