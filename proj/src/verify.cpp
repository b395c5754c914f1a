#include "gramcov/verify.hpp"

#include <cmath>
#include <sstream>

#include "gramcov/criteria.hpp"
#include "gramcov/special.hpp"

namespace gramcov {

namespace {

constexpr double kNormTol = 1e-9;

std::string interval_detail(double lower, double measured, double upper) {
    std::ostringstream os;
    os << "lower=" << lower << " measured=" << measured << " upper=" << upper;
    return os.str();
}

/// Common norm of all columns (or rows); throws NotNormalized when they are
/// not all equal within tolerance.
double common_norm(const Matrix& K, NormMode mode) {
    const Index count = mode == NormMode::ColumnsNormalized ? K.cols() : K.rows();
    double a = 0.0;
    for (Index i = 0; i < count; ++i) {
        const double norm =
            mode == NormMode::ColumnsNormalized ? K.col(i).norm() : K.row(i).norm();
        if (i == 0) {
            a = norm;
        } else if (std::abs(norm - a) > kNormTol * std::max(1.0, a)) {
            throw NotNormalized("norms are not all equal along the requested direction");
        }
    }
    if (a <= 0.0) throw NotNormalized("common norm must be positive");
    return a;
}

}  // namespace

std::string norm_mode_to_string(NormMode mode) {
    return mode == NormMode::ColumnsNormalized ? "columns-normalized" : "rows-normalized";
}

VerificationReport verify_identity(const Matrix& K) {
    validate_embedding(K);
    const double lhs = l_nc(K) + row_norm_pow4_sum(K);
    const double rhs = l_c(K) + col_norm_pow4_sum(K);
    VerificationReport r;
    r.check = "duality-identity";
    r.rows = K.rows();
    r.cols = K.cols();
    r.tolerance = 1e-10;
    r.residual = std::abs(lhs - rhs) / std::max(1.0, rhs);
    r.pass = r.residual <= r.tolerance;
    return r;
}

VerificationReport verify_doubly_normalized(const Matrix& K) {
    validate_embedding(K);
    for (Index i = 0; i < K.cols(); ++i) {
        if (std::abs(K.col(i).norm() - 1.0) > kNormTol) {
            throw NotDoublyNormalized("column " + std::to_string(i) + " is not unit norm");
        }
    }
    for (Index j = 0; j < K.rows(); ++j) {
        if (std::abs(K.row(j).norm() - 1.0) > kNormTol) {
            throw NotDoublyNormalized("row " + std::to_string(j) + " is not unit norm");
        }
    }
    const double lc = l_c(K);
    const double lnc = l_nc(K);
    const double shift = static_cast<double>(K.cols()) - static_cast<double>(K.rows());
    VerificationReport r;
    r.check = "doubly-normalized-equivalence";
    r.rows = K.rows();
    r.cols = K.cols();
    r.residual = std::abs(lnc - (lc + shift));
    r.tolerance = 1e-9 * std::max(1.0, lc);
    r.pass = r.residual <= r.tolerance;
    return r;
}

NormInterplayRow norm_interplay_bounds(Index M, Index N, NormMode mode, double a) {
    const double a4 = a * a * a * a;
    NormInterplayRow row;
    if (mode == NormMode::ColumnsNormalized) {
        const double n2 = static_cast<double>(N) * static_cast<double>(N);
        row.lower = n2 / static_cast<double>(M) * a4;
        row.upper = n2 * a4;
    } else {
        const double m2 = static_cast<double>(M) * static_cast<double>(M);
        row.lower = m2 / static_cast<double>(N) * a4;
        row.upper = m2 * a4;
    }
    return row;
}

NormInterplayRow norm_interplay_report(const Matrix& K, NormMode mode) {
    validate_embedding(K);
    const double a = common_norm(K, mode);
    NormInterplayRow row = norm_interplay_bounds(K.rows(), K.cols(), mode, a);
    row.measured = mode == NormMode::ColumnsNormalized ? row_norm_pow4_sum(K)
                                                       : col_norm_pow4_sum(K);
    return row;
}

VerificationReport verify_norm_bounds(const Matrix& K, NormMode mode) {
    const NormInterplayRow row = norm_interplay_report(K, mode);
    VerificationReport r;
    r.check = "norm-bounds-" + norm_mode_to_string(mode);
    r.rows = K.rows();
    r.cols = K.cols();
    // The inequalities are exact; the slack only absorbs round-off at the
    // equality-attaining extremes.
    r.tolerance = 1e-12 * std::max(1.0, row.upper);
    r.residual = std::max({row.lower - row.measured, row.measured - row.upper, 0.0});
    r.pass = r.residual <= r.tolerance;
    r.detail = interval_detail(row.lower, row.measured, row.upper);
    return r;
}

VerificationReport verify_corollary_bounds(const Matrix& K, NormMode mode) {
    validate_embedding(K);
    const double a = common_norm(K, mode);
    if (std::abs(a - 1.0) > kNormTol) {
        throw NotNormalized("criterion bounds require unit norms");
    }
    const double m = static_cast<double>(K.rows());
    const double n = static_cast<double>(K.cols());
    const double lc = l_c(K);
    const double lnc = l_nc(K);

    double lower, upper, measured;
    if (mode == NormMode::ColumnsNormalized) {
        lower = lnc - n + n * n / m;
        upper = lnc - n + n * n;
        measured = lc;
    } else {
        lower = lc - m + m * m / n;
        upper = lc - m + m * m;
        measured = lnc;
    }
    VerificationReport r;
    r.check = "criterion-bounds-" + norm_mode_to_string(mode);
    r.rows = K.rows();
    r.cols = K.cols();
    r.tolerance = 1e-12 * std::max({1.0, std::abs(lower), std::abs(upper)});
    r.residual = std::max({lower - measured, measured - upper, 0.0});
    r.pass = r.residual <= r.tolerance;
    r.detail = interval_detail(lower, measured, upper);
    return r;
}

std::vector<VerificationReport> verify_sphere_stats(Index M, Index n_pairs, std::uint64_t seed) {
    if (n_pairs < 2) throw InvalidArgument("need at least two pairs");
    const SphereSampleSet set = sample_uniform_sphere(M, 2 * n_pairs, seed);
    const DotProductStats stats = dot_product_stats(set, PairingMode::Disjoint);
    const double n = static_cast<double>(stats.n_pairs);
    const double md = static_cast<double>(M);

    std::vector<VerificationReport> out;
    VerificationReport base;
    base.rows = M;
    base.cols = 2 * n_pairs;
    base.seed = seed;
    base.generator = "uniform-sphere";

    // E[x^T y] = 0; the standard error of the sample mean is sqrt(1/(M n)).
    VerificationReport mean = base;
    mean.check = "sphere-dot-mean";
    mean.residual = std::abs(stats.mean);
    mean.tolerance = 3.0 * std::sqrt(1.0 / (md * n));
    mean.pass = mean.residual <= mean.tolerance;
    out.push_back(mean);

    // Var[x^T y] = 1/M; the fourth moment of the Beta-distributed dot
    // product gives Var(s^2) = (mu4 - sigma^4 (n-3)/(n-1)) / n.
    const double sigma2 = 1.0 / md;
    const double mu4 = (3.0 - 6.0 / (md + 2.0)) / (md * md);
    const double var_of_var = (mu4 - sigma2 * sigma2 * (n - 3.0) / (n - 1.0)) / n;
    VerificationReport var = base;
    var.check = "sphere-dot-variance";
    var.residual = std::abs(stats.variance - sigma2);
    var.tolerance = 5.0 * std::sqrt(var_of_var);
    var.pass = var.residual <= var.tolerance;
    out.push_back(var);

    VerificationReport ks = base;
    ks.check = "sphere-dot-beta-ks";
    ks.residual = stats.ks;
    ks.tolerance = ks_critical_001(stats.n_pairs);
    ks.pass = ks.residual <= ks.tolerance;
    out.push_back(ks);
    return out;
}

}  // namespace gramcov
