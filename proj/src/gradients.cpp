#include "gramcov/gradients.hpp"

#include <cmath>

namespace gramcov {

namespace detail {

namespace {

constexpr double kVarianceEps = 1e-4;

Matrix center_rows(const Matrix& K) { return K.colwise() - K.rowwise().mean(); }

/// VJP of row centering: G -> G - rowmean(G).
Matrix center_vjp(const Matrix& G) { return G.colwise() - G.rowwise().mean(); }

}  // namespace

Matrix grad_l_c(const Matrix& K) {
    Matrix G = gram(K);
    G.diagonal().setZero();
    return 4.0 * (K * G);
}

Matrix grad_l_nc(const Matrix& K) {
    Matrix C = covariance_raw(K);
    C.diagonal().setZero();
    return 4.0 * (C * K);
}

GradPair grad_invariance_mse(const Matrix& K, const Matrix& Kp) {
    require_same_shape(K, Kp);
    Matrix d = (2.0 / static_cast<double>(K.size())) * (K - Kp);
    return {d, Matrix(-d)};
}

Matrix grad_variance_hinge(const Matrix& K) {
    const Index m = K.rows();
    const Index n = K.cols();
    if (n < 2) throw InvalidArgument("variance hinge requires at least two samples");
    const Matrix centered = center_rows(K);
    Matrix grad = Matrix::Zero(m, n);
    for (Index j = 0; j < m; ++j) {
        const double var = centered.row(j).squaredNorm() / static_cast<double>(n - 1);
        const double s = std::sqrt(var + kVarianceEps);
        if (s < 1.0) {
            const double coef = -1.0 / (static_cast<double>(m) * static_cast<double>(n - 1) * s);
            grad.row(j) = coef * centered.row(j);
        }
    }
    return grad;
}

Matrix grad_covariance_c(const Matrix& K) {
    const Index n = K.cols();
    if (n < 2) throw InvalidArgument("covariance requires at least two samples");
    const Matrix centered = center_rows(K);
    Matrix C = (centered * centered.transpose()) / static_cast<double>(n - 1);
    C.diagonal().setZero();
    const Matrix g = (4.0 / static_cast<double>(n - 1)) * (C * centered);
    return center_vjp(g);
}

Matrix grad_c_exp(const Matrix& K, double tau) {
    if (tau <= 0.0) throw InvalidArgument("temperature must be positive");
    const Index m = K.rows();
    const Index n = K.cols();
    if (m < 2) throw InvalidArgument("c_exp requires at least two dimensions");
    if (n < 2) throw InvalidArgument("c_exp requires at least two samples");
    const Matrix centered = center_rows(K);
    const Matrix C = (centered * centered.transpose()) / static_cast<double>(n - 1);

    // W_ij = softmax over row i's off-diagonal of C/tau, divided by M*tau.
    Matrix W = Matrix::Zero(m, m);
    for (Index i = 0; i < m; ++i) {
        double rowmax = -std::numeric_limits<double>::infinity();
        for (Index j = 0; j < m; ++j) {
            if (j != i) rowmax = std::max(rowmax, C(i, j) / tau);
        }
        double denom = 0.0;
        for (Index j = 0; j < m; ++j) {
            if (j != i) denom += std::exp(C(i, j) / tau - rowmax);
        }
        for (Index j = 0; j < m; ++j) {
            if (j != i) {
                W(i, j) = std::exp(C(i, j) / tau - rowmax) / denom /
                          (static_cast<double>(m) * tau);
            }
        }
    }
    const Matrix g = ((W + W.transpose()) * centered) / static_cast<double>(n - 1);
    return center_vjp(g);
}

Matrix grad_rewrite_cov(const Matrix& K) {
    const Index n = K.cols();
    if (n < 2) throw InvalidArgument("rewrite requires at least two samples");
    const double scale = 1.0 / std::sqrt(static_cast<double>(n - 1));
    const Matrix hat = center_rows(K) * scale;
    const Matrix G = hat.transpose() * hat;
    const Vector row_sq = hat.rowwise().squaredNorm();
    // d(l_c + l_reg)/dHat = 4 (Hat G - diag(row norms^2) Hat)
    const Matrix inner = 4.0 * (hat * G - row_sq.asDiagonal() * hat);
    return center_vjp(inner * scale);
}

GradPair grad_infonce(const Matrix& K, const Matrix& Kp, double tau, SimilarityTransform f,
                      bool include_positive, bool two_branch_negatives) {
    require_same_shape(K, Kp);
    if (tau <= 0.0) throw InvalidArgument("temperature must be positive");
    const Index n = K.cols();
    if (n < 2) throw InvalidArgument("InfoNCE requires at least two samples");
    const Matrix S = K.transpose() * K;
    const Matrix T = K.transpose() * Kp;

    Matrix P = Matrix::Zero(n, n);  // within-branch negative weights
    Matrix R = Matrix::Zero(n, n);  // cross-branch negative weights
    Vector pos_coef(n);
    for (Index i = 0; i < n; ++i) {
        const double fpos = apply_similarity(f, T(i, i)) / tau;
        double rowmax = include_positive ? fpos : -std::numeric_limits<double>::infinity();
        for (Index j = 0; j < n; ++j) {
            if (j == i) continue;
            rowmax = std::max(rowmax, apply_similarity(f, S(i, j)) / tau);
            if (two_branch_negatives) {
                rowmax = std::max(rowmax, apply_similarity(f, T(i, j)) / tau);
            }
        }
        double denom = include_positive ? std::exp(fpos - rowmax) : 0.0;
        for (Index j = 0; j < n; ++j) {
            if (j == i) continue;
            denom += std::exp(apply_similarity(f, S(i, j)) / tau - rowmax);
            if (two_branch_negatives) {
                denom += std::exp(apply_similarity(f, T(i, j)) / tau - rowmax);
            }
        }
        const double q = include_positive ? std::exp(fpos - rowmax) / denom : 0.0;
        pos_coef(i) = similarity_slope(f, T(i, i)) / tau * (q - 1.0);
        for (Index j = 0; j < n; ++j) {
            if (j == i) continue;
            const double p = std::exp(apply_similarity(f, S(i, j)) / tau - rowmax) / denom;
            P(i, j) = similarity_slope(f, S(i, j)) / tau * p;
            if (two_branch_negatives) {
                const double r = std::exp(apply_similarity(f, T(i, j)) / tau - rowmax) / denom;
                R(i, j) = similarity_slope(f, T(i, j)) / tau * r;
            }
        }
    }

    Matrix dK = K * (P + P.transpose()) + Kp * pos_coef.asDiagonal();
    Matrix dKp = K * pos_coef.asDiagonal();
    if (two_branch_negatives) {
        dK += Kp * R.transpose();
        dKp += K * R;
    }
    return {std::move(dK), std::move(dKp)};
}

GradPair grad_spectral_contrastive(const Matrix& K, const Matrix& Kp) {
    require_same_shape(K, Kp);
    return {Matrix(-2.0 * Kp + grad_l_c(K)), Matrix(-2.0 * K)};
}

GradPair grad_barlow_core(const Matrix& K, const Matrix& Kp, double lambda_bt) {
    require_same_shape(K, Kp);
    const double n = static_cast<double>(K.cols());
    const Matrix C = (K * Kp.transpose()) / n;
    Matrix W = 2.0 * lambda_bt * C;
    for (Index j = 0; j < C.rows(); ++j) W(j, j) = -2.0 * (1.0 - C(j, j));
    return {Matrix((W * Kp) / n), Matrix((W.transpose() * K) / n)};
}

Matrix grad_tcr_core(const Matrix& K, double alpha) {
    if (alpha <= 0.0) throw InvalidArgument("alpha must be positive");
    Matrix A = alpha * (K * K.transpose());
    A.diagonal().array() += 1.0;
    return -alpha * A.llt().solve(K);
}

GradPair grad_core(const std::string& id, const Matrix& K, const Matrix& Kp,
                   const LossParams& params) {
    const LossInfo& info = loss_info(id);
    const VicregWeights& w = params.weights;

    if (id == "vicreg" || id == "vicreg-exp" || id == "vicreg-ctr" ||
        id == "vicreg-ctr-rewrite") {
        w.validate();
        GradPair inv = grad_invariance_mse(K, Kp);
        Matrix dK = w.invariance * inv.dK;
        Matrix dKp = w.invariance * (*inv.dKp);
        if (id == "vicreg") {
            dK += w.variance * grad_variance_hinge(K) + w.covariance * grad_covariance_c(K);
            dKp += w.variance * grad_variance_hinge(Kp) + w.covariance * grad_covariance_c(Kp);
        } else if (id == "vicreg-exp") {
            dK += w.variance * grad_variance_hinge(K) +
                  w.covariance * grad_c_exp(K, params.tau);
            dKp += w.variance * grad_variance_hinge(Kp) +
                   w.covariance * grad_c_exp(Kp, params.tau);
        } else if (id == "vicreg-ctr") {
            const Matrix gt = w.variance * grad_variance_hinge(K.transpose()) +
                              w.covariance * grad_c_exp(K.transpose(), params.tau);
            const Matrix gtp = w.variance * grad_variance_hinge(Kp.transpose()) +
                               w.covariance * grad_c_exp(Kp.transpose(), params.tau);
            dK += gt.transpose();
            dKp += gtp.transpose();
        } else {
            dK += w.variance * grad_variance_hinge(K) + w.covariance * grad_rewrite_cov(K);
            dKp += w.variance * grad_variance_hinge(Kp) + w.covariance * grad_rewrite_cov(Kp);
        }
        return {std::move(dK), std::move(dKp)};
    }
    if (id == "scl") return grad_spectral_contrastive(K, Kp);
    if (id == "barlow-twins") return grad_barlow_core(K, Kp, params.lambda_bt);
    if (id == "tcr") return {grad_tcr_core(K, params.alpha), std::nullopt};

    const bool include_positive = id.rfind("simclr", 0) == 0;
    return grad_infonce(K, Kp, params.tau, info.similarity, include_positive,
                        params.two_branch_negatives);
}

}  // namespace detail

GradPair analytic_grad(const std::string& id, const Matrix& K, const Matrix& Kp,
                       const LossParams& params) {
    const LossInfo& info = loss_info(id);
    const NormalizationStrategy strategy = transform_strategy(info.canonical, K.rows(), K.cols());

    const Matrix Z = apply(strategy, K);
    if (!info.two_branch) {
        GradPair core = detail::grad_core(id, Z, Z, params);
        return {apply_vjp(strategy, K, core.dK), std::nullopt};
    }
    require_same_shape(K, Kp);
    const Matrix Zp = apply(strategy, Kp);
    GradPair core = detail::grad_core(id, Z, Zp, params);
    return {apply_vjp(strategy, K, core.dK), apply_vjp(strategy, Kp, *core.dKp)};
}

GradPair finite_diff_grad(const LossFn& fn, const Matrix& K, const Matrix& Kp, double h,
                          bool two_branch) {
    if (h <= 0.0) throw InvalidArgument("step size must be positive");
    const auto diff = [&](Matrix& target, Index r, Index c) {
        const double saved = target(r, c);
        target(r, c) = saved + h;
        const double up = fn(K, Kp);
        target(r, c) = saved - h;
        const double down = fn(K, Kp);
        target(r, c) = saved;
        return (up - down) / (2.0 * h);
    };

    GradPair out;
    out.dK.resize(K.rows(), K.cols());
    Matrix& k_mut = const_cast<Matrix&>(K);
    for (Index c = 0; c < K.cols(); ++c) {
        for (Index r = 0; r < K.rows(); ++r) out.dK(r, c) = diff(k_mut, r, c);
    }
    if (two_branch) {
        out.dKp = Matrix(Kp.rows(), Kp.cols());
        Matrix& kp_mut = const_cast<Matrix&>(Kp);
        for (Index c = 0; c < Kp.cols(); ++c) {
            for (Index r = 0; r < Kp.rows(); ++r) (*out.dKp)(r, c) = diff(kp_mut, r, c);
        }
    }
    return out;
}

// Oracle used by grad_check: the losses are re-derived here in long double,
// independently of the production code path, so the central-difference
// quotient at h = 1e-6 is not swamped by evaluation round-off.
namespace oracle {

using Ld = long double;
using MatrixL = Eigen::Matrix<Ld, Eigen::Dynamic, Eigen::Dynamic>;

MatrixL l2_columns(const MatrixL& K) {
    MatrixL out = K;
    for (Index i = 0; i < K.cols(); ++i) out.col(i) /= K.col(i).norm();
    return out;
}

MatrixL bt_standardize(const MatrixL& K) {
    const Ld target = std::sqrt(static_cast<Ld>(K.cols()));
    MatrixL out = K;
    for (Index j = 0; j < K.rows(); ++j) {
        Eigen::Matrix<Ld, 1, Eigen::Dynamic> row =
            K.row(j).array() - K.row(j).mean();
        out.row(j) = row * (target / row.norm());
    }
    return out;
}

MatrixL center_rows_l(const MatrixL& K) {
    MatrixL out = K;
    for (Index j = 0; j < K.rows(); ++j) out.row(j).array() -= K.row(j).mean();
    return out;
}

Ld offdiag_sq(const MatrixL& A) {
    Ld sum = 0;
    for (Index i = 0; i < A.rows(); ++i) {
        for (Index j = 0; j < A.cols(); ++j) {
            if (i != j) sum += A(i, j) * A(i, j);
        }
    }
    return sum;
}

Ld lse_offdiag_row(const MatrixL& C, Index i, Ld tau) {
    Ld mx = -std::numeric_limits<Ld>::infinity();
    for (Index j = 0; j < C.cols(); ++j) {
        if (j != i) mx = std::max(mx, C(i, j) / tau);
    }
    Ld sum = 0;
    for (Index j = 0; j < C.cols(); ++j) {
        if (j != i) sum += std::exp(C(i, j) / tau - mx);
    }
    return mx + std::log(sum);
}

Ld inv_mse(const MatrixL& K, const MatrixL& Kp) {
    return (K - Kp).squaredNorm() / static_cast<Ld>(K.size());
}

Ld var_hinge(const MatrixL& K) {
    const MatrixL c = center_rows_l(K);
    Ld total = 0;
    for (Index j = 0; j < K.rows(); ++j) {
        const Ld var = c.row(j).squaredNorm() / static_cast<Ld>(K.cols() - 1);
        total += std::max(Ld(0), Ld(1) - std::sqrt(var + Ld(1e-4)));
    }
    return total / static_cast<Ld>(K.rows());
}

MatrixL sample_cov(const MatrixL& K) {
    const MatrixL c = center_rows_l(K);
    return (c * c.transpose()) / static_cast<Ld>(K.cols() - 1);
}

Ld cov_c(const MatrixL& K) { return offdiag_sq(sample_cov(K)); }

Ld cexp(const MatrixL& K, Ld tau) {
    const MatrixL C = sample_cov(K);
    Ld total = 0;
    for (Index i = 0; i < C.rows(); ++i) total += lse_offdiag_row(C, i, tau);
    return total / static_cast<Ld>(C.rows());
}

Ld rewrite_cov(const MatrixL& K) {
    const MatrixL hat = center_rows_l(K) / std::sqrt(static_cast<Ld>(K.cols() - 1));
    const MatrixL G = hat.transpose() * hat;
    Ld lreg = 0;
    for (Index i = 0; i < hat.cols(); ++i) {
        const Ld s = hat.col(i).squaredNorm();
        lreg += s * s;
    }
    for (Index j = 0; j < hat.rows(); ++j) {
        const Ld s = hat.row(j).squaredNorm();
        lreg -= s * s;
    }
    return offdiag_sq(G) + lreg;
}

Ld fval(SimilarityTransform f, Ld x) {
    switch (f) {
        case SimilarityTransform::Identity: return x;
        case SimilarityTransform::Absolute: return std::abs(x);
        case SimilarityTransform::Square: return x * x;
    }
    return x;
}

Ld infonce(const MatrixL& K, const MatrixL& Kp, Ld tau, SimilarityTransform f,
           bool include_positive, bool two_branch) {
    const Index n = K.cols();
    const MatrixL S = K.transpose() * K;
    const MatrixL T = K.transpose() * Kp;
    Ld total = 0;
    for (Index i = 0; i < n; ++i) {
        const Ld pos = fval(f, T(i, i)) / tau;
        Ld mx = include_positive ? pos : -std::numeric_limits<Ld>::infinity();
        for (Index j = 0; j < n; ++j) {
            if (j == i) continue;
            mx = std::max(mx, fval(f, S(i, j)) / tau);
            if (two_branch) mx = std::max(mx, fval(f, T(i, j)) / tau);
        }
        Ld sum = include_positive ? std::exp(pos - mx) : Ld(0);
        for (Index j = 0; j < n; ++j) {
            if (j == i) continue;
            sum += std::exp(fval(f, S(i, j)) / tau - mx);
            if (two_branch) sum += std::exp(fval(f, T(i, j)) / tau - mx);
        }
        total += -pos + mx + std::log(sum);
    }
    return total;
}

Ld eval(const std::string& id, MatrixL K, MatrixL Kp, const LossParams& params) {
    const LossInfo& info = loss_info(id);
    if (info.canonical == InputTransform::L2Columns) {
        K = l2_columns(K);
        if (info.two_branch) Kp = l2_columns(Kp);
    } else if (info.canonical == InputTransform::BtStandardize) {
        K = bt_standardize(K);
        if (info.two_branch) Kp = bt_standardize(Kp);
    }
    const Ld tau = static_cast<Ld>(params.tau);
    const Ld li = static_cast<Ld>(params.weights.invariance);
    const Ld lv = static_cast<Ld>(params.weights.variance);
    const Ld lc = static_cast<Ld>(params.weights.covariance);

    if (id == "vicreg") {
        return li * inv_mse(K, Kp) + lv * (var_hinge(K) + var_hinge(Kp)) +
               lc * (cov_c(K) + cov_c(Kp));
    }
    if (id == "vicreg-exp") {
        return li * inv_mse(K, Kp) + lv * (var_hinge(K) + var_hinge(Kp)) +
               lc * (cexp(K, tau) + cexp(Kp, tau));
    }
    if (id == "vicreg-ctr") {
        const MatrixL Kt = K.transpose();
        const MatrixL Kpt = Kp.transpose();
        return li * inv_mse(K, Kp) + lv * (var_hinge(Kt) + var_hinge(Kpt)) +
               lc * (cexp(Kt, tau) + cexp(Kpt, tau));
    }
    if (id == "vicreg-ctr-rewrite") {
        return li * inv_mse(K, Kp) + lv * (var_hinge(K) + var_hinge(Kp)) +
               lc * (rewrite_cov(K) + rewrite_cov(Kp));
    }
    if (id == "scl") {
        Ld pos = 0;
        for (Index i = 0; i < K.cols(); ++i) pos += K.col(i).dot(Kp.col(i));
        const MatrixL G = K.transpose() * K;
        return -2 * pos + offdiag_sq(G);
    }
    if (id == "barlow-twins") {
        const MatrixL C = (K * Kp.transpose()) / static_cast<Ld>(K.cols());
        Ld diag = 0;
        for (Index j = 0; j < C.rows(); ++j) diag += (1 - C(j, j)) * (1 - C(j, j));
        return diag + static_cast<Ld>(params.lambda_bt) * offdiag_sq(C);
    }
    if (id == "tcr") {
        MatrixL A = static_cast<Ld>(params.alpha) * (K * K.transpose());
        A.diagonal().array() += 1;
        const Eigen::LLT<MatrixL> llt(A);
        Ld logdet = 0;
        for (Index i = 0; i < A.rows(); ++i) logdet += 2 * std::log(llt.matrixL()(i, i));
        return Ld(-0.5) * logdet;
    }
    const bool include_positive = id.rfind("simclr", 0) == 0;
    return infonce(K, Kp, tau, info.similarity, include_positive,
                   params.two_branch_negatives);
}

GradPair fd_grad(const std::string& id, const Matrix& K, const Matrix& Kp, double h,
                 bool two_branch, const LossParams& params) {
    MatrixL Kl = K.cast<Ld>();
    MatrixL Kpl = Kp.cast<Ld>();
    const Ld hl = static_cast<Ld>(h);
    const auto diff = [&](MatrixL& target, Index r, Index c) {
        const Ld saved = target(r, c);
        target(r, c) = saved + hl;
        const Ld up = eval(id, Kl, Kpl, params);
        target(r, c) = saved - hl;
        const Ld down = eval(id, Kl, Kpl, params);
        target(r, c) = saved;
        return static_cast<double>((up - down) / (2 * hl));
    };
    GradPair out;
    out.dK.resize(K.rows(), K.cols());
    for (Index c = 0; c < K.cols(); ++c) {
        for (Index r = 0; r < K.rows(); ++r) out.dK(r, c) = diff(Kl, r, c);
    }
    if (two_branch) {
        out.dKp = Matrix(Kp.rows(), Kp.cols());
        for (Index c = 0; c < Kp.cols(); ++c) {
            for (Index r = 0; r < Kp.rows(); ++r) (*out.dKp)(r, c) = diff(Kpl, r, c);
        }
    }
    return out;
}

}  // namespace oracle

namespace {

void accumulate_errors(const Matrix& a, const Matrix& fd, double& max_rel, double& max_abs) {
    for (Index c = 0; c < a.cols(); ++c) {
        for (Index r = 0; r < a.rows(); ++r) {
            const double abs_err = std::abs(a(r, c) - fd(r, c));
            const double denom = std::max({std::abs(a(r, c)), std::abs(fd(r, c)), 1e-8});
            max_abs = std::max(max_abs, abs_err);
            max_rel = std::max(max_rel, abs_err / denom);
        }
    }
}

}  // namespace

GradCheckReport grad_check(const std::string& id, Matrix K, Matrix Kp, const LossParams& params,
                           double tol, double h) {
    const LossInfo& info = loss_info(id);
    const double knorm = K.norm();
    if (knorm > 0.0) K /= knorm;
    if (info.two_branch) {
        const double kpnorm = Kp.norm();
        if (kpnorm > 0.0) Kp /= kpnorm;
    }

    const GradPair analytic = analytic_grad(id, K, Kp, params);
    const GradPair fd = oracle::fd_grad(id, K, Kp, h, info.two_branch, params);

    GradCheckReport report;
    report.loss_id = id;
    report.h = h;
    accumulate_errors(analytic.dK, fd.dK, report.max_rel_err, report.max_abs_err);
    if (info.two_branch) {
        accumulate_errors(*analytic.dKp, *fd.dKp, report.max_rel_err, report.max_abs_err);
    }
    report.pass = report.max_rel_err <= tol;
    return report;
}

}  // namespace gramcov
