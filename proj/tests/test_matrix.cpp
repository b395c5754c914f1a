#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_util.hpp"

#include <fstream>

#include "gramcov/csv.hpp"
#include "gramcov/rng.hpp"

using namespace gramcov;
using gramcov::testing::mat2;

TEST_CASE("gram matrix") {
    CHECK(gram(Matrix::Identity(2, 2)).isApprox(Matrix::Identity(2, 2)));
    const Matrix K = mat2(1, 2, 3, 4);
    Matrix expected = mat2(10, 14, 14, 20);
    CHECK(gram(K).isApprox(expected));
    CHECK(gram(Matrix::Ones(2, 2)).isApprox(Matrix::Constant(2, 2, 2.0)));
}

TEST_CASE("covariance_raw") {
    const Matrix K = mat2(1, 2, 3, 4);
    CHECK(covariance_raw(K).isApprox(mat2(5, 11, 11, 25)));
    CHECK(covariance_raw(Matrix::Identity(2, 2)).isApprox(Matrix::Identity(2, 2)));
    CHECK(covariance_raw(Matrix::Ones(2, 2)).isApprox(Matrix::Constant(2, 2, 2.0)));
}

TEST_CASE("covariance_sample") {
    Matrix K(1, 2);
    K << 1, -1;
    CHECK(covariance_sample(K)(0, 0) == doctest::Approx(2.0));

    CHECK(covariance_sample(Matrix::Constant(3, 4, 2.5)).cwiseAbs().maxCoeff() == 0.0);

    CHECK(covariance_sample(Matrix::Identity(2, 2)).isApprox(mat2(0.5, -0.5, -0.5, 0.5)));

    Matrix single(2, 1);
    single << 1, 2;
    CHECK_THROWS_AS(covariance_sample(single), InvalidArgument);
}

TEST_CASE("extract_diag") {
    CHECK(extract_diag(mat2(1, 2, 3, 4)).isApprox(mat2(1, 0, 0, 4)));
    CHECK(extract_diag(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3)));
    CHECK(extract_diag(Matrix::Zero(3, 3)).isApprox(Matrix::Zero(3, 3)));
}

TEST_CASE("offdiag_sq_frobenius") {
    CHECK(offdiag_sq_frobenius(mat2(10, 14, 14, 20)) == doctest::Approx(392.0));
    CHECK(offdiag_sq_frobenius(mat2(3, 0, 0, 7)) == 0.0);
    CHECK(offdiag_sq_frobenius(Matrix::Constant(2, 2, 2.0)) == doctest::Approx(8.0));
}

TEST_CASE("fourth-power norm sums") {
    const Matrix K = mat2(1, 2, 3, 4);
    CHECK(col_norm_pow4_sum(K) == doctest::Approx(500.0));
    CHECK(row_norm_pow4_sum(K) == doctest::Approx(650.0));
    CHECK(col_norm_pow4_sum(Matrix::Identity(5, 5)) == doctest::Approx(5.0));
    CHECK(col_norm_pow4_sum(Matrix::Zero(3, 4)) == 0.0);
    CHECK(row_norm_pow4_sum(Matrix::Zero(3, 4)) == 0.0);
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(validate_embedding(Matrix(0, 3)), InvalidArgument);
    Matrix bad = Matrix::Ones(2, 2);
    bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(validate_embedding(bad), InvalidArgument);
    CHECK_THROWS_AS(require_same_shape(Matrix::Zero(2, 3), Matrix::Zero(3, 2)), ShapeMismatch);
}

TEST_CASE("symmetry and Frobenius duality on random matrices") {
    Rng rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        const Index m = 2 + static_cast<Index>(rng.below(30));
        const Index n = 2 + static_cast<Index>(rng.below(30));
        const Matrix K = gen_gaussian(m, n, rng);
        const Matrix G = gram(K);
        const Matrix C = covariance_raw(K);
        CHECK((G - G.transpose()).cwiseAbs().maxCoeff() <=
              1e-12 * std::max(1.0, G.cwiseAbs().maxCoeff()));
        CHECK((C - C.transpose()).cwiseAbs().maxCoeff() <=
              1e-12 * std::max(1.0, C.cwiseAbs().maxCoeff()));
        // ||K^T K||_F^2 == ||K K^T||_F^2 by cyclic trace.
        const double gf = G.squaredNorm();
        const double cf = C.squaredNorm();
        CHECK(std::abs(gf - cf) <= 1e-12 * std::max(1.0, gf));
        // offdiag = full Frobenius minus diagonal Frobenius.
        const double direct = offdiag_sq_frobenius(G);
        const double indirect = G.squaredNorm() - extract_diag(G).squaredNorm();
        CHECK(std::abs(direct - indirect) <= 1e-12 * std::max(1.0, direct));
    }
}

TEST_CASE("csv round trip is exact") {
    Rng rng(5);
    const Matrix K = gen_gaussian(7, 5, rng);
    const auto path = std::filesystem::temp_directory_path() / "gramcov_test_matrix.csv";
    write_matrix_csv(path, K);
    const Matrix back = read_matrix_csv(path);
    REQUIRE(back.rows() == K.rows());
    REQUIRE(back.cols() == K.cols());
    CHECK((back - K).cwiseAbs().maxCoeff() == 0.0);
    std::filesystem::remove(path);
}

TEST_CASE("csv parse errors carry the row number") {
    const auto path = std::filesystem::temp_directory_path() / "gramcov_bad.csv";
    {
        std::ofstream out(path);
        out << "1.0,2.0\n3.0,oops\n";
    }
    CHECK_THROWS_WITH_AS(read_matrix_csv(path), doctest::Contains("row 2"), ParseError);
    std::filesystem::remove(path);
}
