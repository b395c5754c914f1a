#include "gramcov/matrix.hpp"

namespace gramcov {

void validate_embedding(const Matrix& K) {
    if (K.rows() < 1 || K.cols() < 1) {
        throw InvalidArgument("embedding matrix must have at least one row and one column");
    }
    if (!K.allFinite()) {
        throw InvalidArgument("embedding matrix contains non-finite entries");
    }
}

void require_same_shape(const Matrix& A, const Matrix& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) {
        throw ShapeMismatch("shape mismatch: " + std::to_string(A.rows()) + "x" +
                            std::to_string(A.cols()) + " vs " + std::to_string(B.rows()) + "x" +
                            std::to_string(B.cols()));
    }
}

Matrix gram(const Matrix& K) {
    validate_embedding(K);
    return K.transpose() * K;
}

Matrix covariance_raw(const Matrix& K) {
    validate_embedding(K);
    return K * K.transpose();
}

Matrix covariance_sample(const Matrix& K) {
    validate_embedding(K);
    const Index n = K.cols();
    if (n < 2) {
        throw InvalidArgument("covariance_sample requires at least two samples");
    }
    Matrix centered = K.colwise() - K.rowwise().mean();
    return (centered * centered.transpose()) / static_cast<double>(n - 1);
}

Matrix extract_diag(const Matrix& A) {
    if (A.rows() != A.cols()) {
        throw InvalidArgument("extract_diag expects a square matrix");
    }
    return A.diagonal().asDiagonal();
}

double offdiag_sq_frobenius(const Matrix& A) {
    if (A.rows() != A.cols()) {
        throw InvalidArgument("offdiag_sq_frobenius expects a square matrix");
    }
    // Accumulate with compensation; downstream identity checks compare these
    // sums at 1e-12 relative.
    double sum = 0.0, comp = 0.0;
    for (Index j = 0; j < A.cols(); ++j) {
        for (Index i = 0; i < A.rows(); ++i) {
            if (i == j) continue;
            const double term = A(i, j) * A(i, j);
            const double y = term - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
    }
    return sum;
}

double col_norm_pow4_sum(const Matrix& K) {
    validate_embedding(K);
    double sum = 0.0, comp = 0.0;
    for (Index i = 0; i < K.cols(); ++i) {
        const double sq = K.col(i).squaredNorm();
        const double term = sq * sq;
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double row_norm_pow4_sum(const Matrix& K) {
    validate_embedding(K);
    double sum = 0.0, comp = 0.0;
    for (Index j = 0; j < K.rows(); ++j) {
        const double sq = K.row(j).squaredNorm();
        const double term = sq * sq;
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

}  // namespace gramcov
