#pragma once

#include <map>
#include <string>
#include <vector>

#include "gramcov/matrix.hpp"
#include "gramcov/normalize.hpp"

namespace gramcov {

/// Weights of the invariance, variance and covariance terms.
struct VicregWeights {
    double invariance = 25.0;
    double variance = 25.0;
    double covariance = 1.0;

    void validate() const;
};

/// The f applied to similarities in the InfoNCE-style criteria.
enum class SimilarityTransform { Identity, Absolute, Square };

/// Scalar loss with its named sub-terms; value is the weighted sum of the
/// breakdown entries (weights folded in by the evaluating criterion).
struct LossValue {
    double value = 0.0;
    std::map<std::string, double> breakdown;
};

/// Parameter bag shared by the loss registry, gradients and trainer. Each
/// criterion reads only the fields it uses.
struct LossParams {
    VicregWeights weights{};
    double tau = 0.15;            // LSE temperature
    double lambda_bt = 5e-3;      // off-diagonal weight of the cross-correlation loss
    double alpha = 1.0;           // log-det regularization strength
    bool two_branch_negatives = false;  // 2N-2 negatives for InfoNCE-style losses
};

// --- individual criteria -----------------------------------------------

/// Off-diagonal squared Frobenius norm of the N x N Gram matrix.
double l_c(const Matrix& K);

/// Off-diagonal squared Frobenius norm of the M x M matrix K K^T.
double l_nc(const Matrix& K);

/// Mean squared difference over all M*N entries.
double invariance_mse(const Matrix& K, const Matrix& Kp);

/// Hinge on per-dimension standard deviation: mean_j max(0, 1 - sqrt(var_j + 1e-4)),
/// with unbiased per-row variance. Requires N >= 2.
double variance_hinge(const Matrix& K);

/// Off-diagonal squared Frobenius norm of the sample covariance. Requires N >= 2.
double covariance_c(const Matrix& K);

/// Exponential covariance regularization: (1/M) sum_i log sum_{j != i}
/// exp(C_ij / tau) over the sample covariance C, computed with
/// max-subtraction for stability. Requires M >= 2 and N >= 2.
double c_exp(const Matrix& K, double tau);

/// Norm regularizer: sum_i |col_i|^4 - sum_j |row_j|^4.
double l_reg(const Matrix& K);

LossValue vicreg(const Matrix& K, const Matrix& Kp, const VicregWeights& w);
LossValue vicreg_exp(const Matrix& K, const Matrix& Kp, const VicregWeights& w, double tau);

/// Variance and exponential covariance applied to the transposed matrices, so
/// the variance acts on embedding norms and the LSE penalizes the Gram
/// off-diagonals; invariance is unchanged. Requires M >= 2 and N >= 2.
LossValue vicreg_ctr(const Matrix& K, const Matrix& Kp, const VicregWeights& w, double tau);

/// Covariance term rewritten through the Gram route: l_c + l_reg on the
/// centered, 1/sqrt(N-1)-scaled matrix. Numerically equal to covariance_c.
LossValue vicreg_contrastive_rewrite(const Matrix& K, const Matrix& Kp, const VicregWeights& w);

/// InfoNCE with the positive in the denominator; columns of both inputs must
/// be unit norm (within 1e-6) and N >= 2. Negatives are the other samples of
/// the first branch.
double simclr_infonce(const Matrix& K, const Matrix& Kp, double tau, SimilarityTransform f);

/// InfoNCE with the positive excluded from the denominator.
double dcl(const Matrix& K, const Matrix& Kp, double tau, SimilarityTransform f);

/// -2 * (positive dot sum) + l_c(K).
double spectral_contrastive(const Matrix& K, const Matrix& Kp);

/// Cross-correlation criterion. Both branches must have standardized
/// dimensions (zero row mean, population variance 1). C = K K'^T / N.
double barlow_twins(const Matrix& K, const Matrix& Kp, double lambda_bt);

/// -1/2 log det(I + alpha K K^T) via symmetric eigendecomposition; columns
/// must be unit norm.
double tcr(const Matrix& K, double alpha);

// --- loss registry ------------------------------------------------------

/// Canonical input transform a criterion expects; the trainer applies it
/// (or a configured override) before the core evaluation, and gradients are
/// taken through it.
enum class InputTransform { None, L2Columns, BtStandardize };

struct LossInfo {
    std::string id;
    bool two_branch = true;   // consumes K' as a second branch
    bool uses_tau = false;
    InputTransform canonical = InputTransform::None;
    SimilarityTransform similarity = SimilarityTransform::Identity;
};

const LossInfo& loss_info(const std::string& id);  // throws UnknownLoss
const std::vector<std::string>& loss_ids();

/// Input transform as a strategy for a concrete shape.
NormalizationStrategy transform_strategy(InputTransform t, Index M, Index N);

/// Evaluates a registry loss on inputs that already carry the expected
/// normalization (no transform is applied here; preconditions are not
/// re-checked so that configured schemes other than the canonical one can
/// feed the same criterion).
LossValue evaluate_core(const std::string& id, const Matrix& K, const Matrix& Kp,
                        const LossParams& params);

/// Canonical transform followed by the core evaluation.
LossValue evaluate(const std::string& id, const Matrix& K, const Matrix& Kp,
                   const LossParams& params);

namespace detail {

/// Log-sum-exp with max subtraction; values may span the full double range.
double logsumexp(const std::vector<double>& values);

/// InfoNCE core without normalization preconditions.
double infonce(const Matrix& K, const Matrix& Kp, double tau, SimilarityTransform f,
               bool include_positive, bool two_branch_negatives);

/// Cross-correlation core without standardization preconditions.
double barlow_core(const Matrix& K, const Matrix& Kp, double lambda_bt);

/// Log-det core without the unit-norm precondition.
double tcr_core(const Matrix& K, double alpha);

double apply_similarity(SimilarityTransform f, double x);
double similarity_slope(SimilarityTransform f, double x);

}  // namespace detail

}  // namespace gramcov
