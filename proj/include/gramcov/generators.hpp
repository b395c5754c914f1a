#pragma once

#include "gramcov/matrix.hpp"
#include "gramcov/rng.hpp"

namespace gramcov {

// Seeded matrix generators used by the verification sweeps and tests.

Matrix gen_gaussian(Index M, Index N, Rng& rng);
Matrix gen_uniform(Index M, Index N, Rng& rng);  // entries in [-1, 1)
Matrix gen_sparse(Index M, Index N, double density, Rng& rng);
Matrix gen_rank_deficient(Index M, Index N, Index rank, Rng& rng);

/// Square +-1/sqrt(n) sign matrix; rows and columns all have unit norm.
Matrix gen_sign_scaled(Index n, Rng& rng);

/// Random orthogonal matrix from the QR decomposition of a Gaussian draw.
Matrix gen_orthogonal(Index n, Rng& rng);

/// Gaussian draw with unit-norm columns / rows.
Matrix gen_column_normalized(Index M, Index N, Rng& rng);
Matrix gen_row_normalized(Index M, Index N, Rng& rng);

/// Bound-attaining extremes: the constant matrix sits on the lower bound of
/// the norm-interplay inequalities, the one-hot matrix on the upper bound.
Matrix gen_constant_columns_normalized(Index M, Index N);  // every entry 1/sqrt(M)
Matrix gen_one_hot_rows(Index M, Index N);  // single all-ones row; unit columns
Matrix gen_constant_rows_normalized(Index M, Index N);  // every entry 1/sqrt(N)
Matrix gen_one_hot_cols(Index M, Index N);  // single all-ones column; unit rows

}  // namespace gramcov
