#include "gramcov/generators.hpp"

#include <cmath>

#include <Eigen/QR>

#include "gramcov/normalize.hpp"

namespace gramcov {

Matrix gen_gaussian(Index M, Index N, Rng& rng) {
    Matrix K(M, N);
    for (Index j = 0; j < N; ++j) {
        for (Index i = 0; i < M; ++i) K(i, j) = rng.normal();
    }
    return K;
}

Matrix gen_uniform(Index M, Index N, Rng& rng) {
    Matrix K(M, N);
    for (Index j = 0; j < N; ++j) {
        for (Index i = 0; i < M; ++i) K(i, j) = rng.uniform(-1.0, 1.0);
    }
    return K;
}

Matrix gen_sparse(Index M, Index N, double density, Rng& rng) {
    if (density <= 0.0 || density > 1.0) throw InvalidArgument("density must be in (0, 1]");
    Matrix K = Matrix::Zero(M, N);
    for (Index j = 0; j < N; ++j) {
        for (Index i = 0; i < M; ++i) {
            if (rng.uniform() < density) K(i, j) = rng.normal();
        }
    }
    return K;
}

Matrix gen_rank_deficient(Index M, Index N, Index rank, Rng& rng) {
    if (rank < 1 || rank > std::min(M, N)) throw InvalidArgument("invalid rank");
    return gen_gaussian(M, rank, rng) * gen_gaussian(rank, N, rng);
}

Matrix gen_sign_scaled(Index n, Rng& rng) {
    Matrix K(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) K(i, j) = rng.uniform() < 0.5 ? -scale : scale;
    }
    return K;
}

Matrix gen_orthogonal(Index n, Rng& rng) {
    const Matrix A = gen_gaussian(n, n, rng);
    Eigen::HouseholderQR<Matrix> qr(A);
    Matrix Q = qr.householderQ();
    const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j) {
        if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
    }
    return Q;
}

Matrix gen_column_normalized(Index M, Index N, Rng& rng) {
    return l2_normalize_embeddings(gen_gaussian(M, N, rng));
}

Matrix gen_row_normalized(Index M, Index N, Rng& rng) {
    return l2_normalize_embeddings(gen_gaussian(N, M, rng)).transpose();
}

Matrix gen_constant_columns_normalized(Index M, Index N) {
    return Matrix::Constant(M, N, 1.0 / std::sqrt(static_cast<double>(M)));
}

Matrix gen_one_hot_rows(Index M, Index N) {
    Matrix K = Matrix::Zero(M, N);
    K.row(0).setOnes();
    return K;
}

Matrix gen_constant_rows_normalized(Index M, Index N) {
    return Matrix::Constant(M, N, 1.0 / std::sqrt(static_cast<double>(N)));
}

Matrix gen_one_hot_cols(Index M, Index N) {
    Matrix K = Matrix::Zero(M, N);
    K.col(0).setOnes();
    return K;
}

}  // namespace gramcov
