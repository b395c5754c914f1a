#pragma once

#include <doctest.h>

#include "gramcov/generators.hpp"
#include "gramcov/matrix.hpp"

namespace gramcov::testing {

inline Matrix mat2(double a, double b, double c, double d) {
    Matrix K(2, 2);
    K << a, b, c, d;
    return K;
}

inline bool approx_equal(const Matrix& A, const Matrix& B, double tol) {
    return A.rows() == B.rows() && A.cols() == B.cols() && (A - B).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace gramcov::testing
