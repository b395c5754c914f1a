#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_util.hpp"

#include <cmath>

#include "gramcov/normalize.hpp"
#include "gramcov/rng.hpp"

using namespace gramcov;
using gramcov::testing::mat2;

TEST_CASE("center_dimensions") {
    Matrix K(1, 3);
    K << 1, 2, 3;
    Matrix expected(1, 3);
    expected << -1, 0, 1;
    CHECK(center_dimensions(K).isApprox(expected));

    Rng rng(3);
    const Matrix centered = center_dimensions(gen_gaussian(4, 9, rng));
    CHECK(center_dimensions(centered).isApprox(centered));
    CHECK(center_dimensions(Matrix::Constant(2, 5, 3.0)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("l2_normalize_embeddings") {
    Matrix K(2, 1);
    K << 3, 4;
    Matrix expected(2, 1);
    expected << 0.6, 0.8;
    CHECK(l2_normalize_embeddings(K).isApprox(expected));

    const Matrix unit = l2_normalize_embeddings(K);
    CHECK(l2_normalize_embeddings(unit).isApprox(unit, 1e-12));

    Matrix zero(2, 2);
    zero << 1, 0, 1, 0;
    CHECK_THROWS_AS(l2_normalize_embeddings(zero), ZeroNormColumn);
}

TEST_CASE("standardize_dimensions") {
    Matrix K(1, 3);
    K << 1, 2, 3;
    const Matrix S = standardize_dimensions(K);
    const double r = std::sqrt(3.0 / 2.0);
    Matrix expected(1, 3);
    expected << -r, 0, r;
    CHECK(S.isApprox(expected, 1e-12));
    CHECK(S.row(0).norm() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));

    CHECK_THROWS_AS(standardize_dimensions(Matrix::Constant(2, 4, 1.0)), ZeroNormRow);

    Rng rng(11);
    const Matrix R = gen_gaussian(6, 17, rng);
    const Matrix Z = standardize_dimensions(R);
    const double target = std::sqrt(17.0 / 6.0);
    for (Index j = 0; j < Z.rows(); ++j) {
        CHECK(std::abs(Z.row(j).mean()) <= 1e-12);
        CHECK(std::abs(Z.row(j).norm() - target) <= 1e-12);
    }
}

TEST_CASE("strategy validation") {
    NormalizationStrategy s;
    s.embedding_norm_target = 1.0;
    s.dimension_norm_target = 2.0;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    NormalizationStrategy neg;
    neg.embedding_norm_target = -1.0;
    CHECK_THROWS_AS(neg.validate(), InvalidArgument);
}

TEST_CASE("apply named schemes") {
    Rng rng(21);
    const Matrix K = gen_gaussian(4, 10, rng);
    const Index M = K.rows(), N = K.cols();

    SUBCASE("none is the identity") {
        CHECK(apply(resolve_scheme(Scheme::None, M, N), K).isApprox(K));
    }
    SUBCASE("classical yields unit columns and is idempotent") {
        const Matrix Z = apply(resolve_scheme(Scheme::Classical, M, N), K);
        for (Index i = 0; i < N; ++i) CHECK(Z.col(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(apply(resolve_scheme(Scheme::Classical, M, N), Z).isApprox(Z, 1e-12));
    }
    SUBCASE("centered-classical centers then normalizes") {
        const Matrix Z = apply(resolve_scheme(Scheme::CenteredClassical, M, N), K);
        CHECK(Z.isApprox(l2_normalize_embeddings(center_dimensions(K))));
    }
    SUBCASE("scheme B equals standardize_dimensions, row norms sqrt(N/M)") {
        const Matrix Z = apply(resolve_scheme(Scheme::DimStandardize, M, N), K);
        CHECK(Z.isApprox(standardize_dimensions(K), 1e-12));
        const double target = std::sqrt(static_cast<double>(N) / static_cast<double>(M));
        for (Index j = 0; j < M; ++j) {
            CHECK(Z.row(j).norm() == doctest::Approx(target).epsilon(1e-12));
        }
        // Total Frobenius norm after B is sqrt(N).
        CHECK(Z.norm() == doctest::Approx(std::sqrt(static_cast<double>(N))).epsilon(1e-10));
    }
    SUBCASE("vicreg-center only centers") {
        CHECK(apply(resolve_scheme(Scheme::VicregCenter, M, N), K)
                  .isApprox(center_dimensions(K)));
    }
}

TEST_CASE("scheme name round trip") {
    for (auto s : {Scheme::None, Scheme::Classical, Scheme::CenteredClassical,
                   Scheme::DimStandardize, Scheme::VicregCenter}) {
        CHECK(scheme_from_string(scheme_to_string(s)) == s);
    }
    CHECK_THROWS_AS(scheme_from_string("bogus"), InvalidArgument);
}

TEST_CASE("apply_vjp matches finite differences") {
    Rng rng(77);
    const Matrix K = gen_gaussian(3, 5, rng);
    const Matrix G = gen_gaussian(3, 5, rng);  // arbitrary upstream gradient
    const double h = 1e-7;

    for (auto scheme : {Scheme::Classical, Scheme::CenteredClassical, Scheme::DimStandardize,
                        Scheme::VicregCenter}) {
        const NormalizationStrategy strategy = resolve_scheme(scheme, K.rows(), K.cols());
        const Matrix analytic = apply_vjp(strategy, K, G);
        // scalar functional <G, apply(K)> differentiated entry by entry
        Matrix fd(K.rows(), K.cols());
        Matrix mut = K;
        for (Index c = 0; c < K.cols(); ++c) {
            for (Index r = 0; r < K.rows(); ++r) {
                const double saved = mut(r, c);
                mut(r, c) = saved + h;
                const double up = (G.array() * apply(strategy, mut).array()).sum();
                mut(r, c) = saved - h;
                const double down = (G.array() * apply(strategy, mut).array()).sum();
                mut(r, c) = saved;
                fd(r, c) = (up - down) / (2.0 * h);
            }
        }
        CHECK((analytic - fd).cwiseAbs().maxCoeff() <= 1e-6);
    }
}
