#pragma once

#include <functional>
#include <optional>
#include <string>

#include "gramcov/criteria.hpp"
#include "gramcov/matrix.hpp"

namespace gramcov {

/// Gradients of a scalar loss with respect to each input branch; dKp is
/// absent for single-branch losses.
struct GradPair {
    Matrix dK;
    std::optional<Matrix> dKp;
};

struct GradCheckReport {
    std::string loss_id;
    double max_rel_err = 0.0;
    double max_abs_err = 0.0;
    double h = 0.0;
    bool pass = false;
};

/// Exact gradient of the registry loss `id` as consumed by the trainer: the
/// loss composed with its canonical input transform (per-column L2
/// normalization for the cosine-similarity losses, dimension standardization
/// for the cross-correlation loss). Throws UnknownLoss; propagates the loss
/// preconditions that survive the transform.
GradPair analytic_grad(const std::string& id, const Matrix& K, const Matrix& Kp,
                       const LossParams& params);

using LossFn = std::function<double(const Matrix&, const Matrix&)>;

/// Central-difference oracle, (L(x+h) - L(x-h)) / 2h per entry.
GradPair finite_diff_grad(const LossFn& fn, const Matrix& K, const Matrix& Kp, double h,
                          bool two_branch = true);

/// Compares analytic_grad against the central-difference oracle. Inputs are
/// rescaled to unit Frobenius norm first so the step size stays meaningful.
/// Relative error per entry uses a max(|analytic|, |fd|, 1e-8) denominator.
GradCheckReport grad_check(const std::string& id, Matrix K, Matrix Kp, const LossParams& params,
                           double tol = 1e-5, double h = 1e-6);

namespace detail {

// Gradients of individual criteria with respect to their immediate inputs
// (no input transform). Exposed for the trainer's backward pass and tests.

Matrix grad_l_c(const Matrix& K);
Matrix grad_l_nc(const Matrix& K);
GradPair grad_invariance_mse(const Matrix& K, const Matrix& Kp);
Matrix grad_variance_hinge(const Matrix& K);
Matrix grad_covariance_c(const Matrix& K);
Matrix grad_c_exp(const Matrix& K, double tau);
/// Gradient of l_c + l_reg on the centered, 1/sqrt(N-1)-scaled matrix.
Matrix grad_rewrite_cov(const Matrix& K);
GradPair grad_infonce(const Matrix& K, const Matrix& Kp, double tau, SimilarityTransform f,
                      bool include_positive, bool two_branch_negatives);
GradPair grad_spectral_contrastive(const Matrix& K, const Matrix& Kp);
GradPair grad_barlow_core(const Matrix& K, const Matrix& Kp, double lambda_bt);
Matrix grad_tcr_core(const Matrix& K, double alpha);

/// Gradient of evaluate_core(id, ...) with respect to the (already
/// transformed) inputs.
GradPair grad_core(const std::string& id, const Matrix& K, const Matrix& Kp,
                   const LossParams& params);

}  // namespace detail

}  // namespace gramcov
