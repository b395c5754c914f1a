#pragma once

#include <Eigen/Dense>

#include "gramcov/errors.hpp"

namespace gramcov {

// Embedding matrices follow the dims-by-samples convention throughout:
// K is M x N, column i is the embedding of sample i, row j is dimension j.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Throws InvalidArgument unless K is nonempty with finite entries.
void validate_embedding(const Matrix& K);

/// Throws ShapeMismatch unless A and B have identical shape.
void require_same_shape(const Matrix& A, const Matrix& B);

/// N x N Gram matrix K^T K; entry (i,j) is the dot product of embeddings i and j.
Matrix gram(const Matrix& K);

/// M x M second-moment matrix K K^T, no centering or scaling.
Matrix covariance_raw(const Matrix& K);

/// M x M sample covariance: rows centered, then K K^T / (N - 1). Requires N >= 2.
Matrix covariance_sample(const Matrix& K);

/// Diagonal of A with all off-diagonal entries zeroed.
Matrix extract_diag(const Matrix& A);

/// Sum of squares of the off-diagonal entries of a square matrix.
double offdiag_sq_frobenius(const Matrix& A);

/// Sum over columns of the fourth power of the column L2 norm.
double col_norm_pow4_sum(const Matrix& K);

/// Sum over rows of the fourth power of the row L2 norm.
double row_norm_pow4_sum(const Matrix& K);

}  // namespace gramcov
