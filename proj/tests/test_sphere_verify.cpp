#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_util.hpp"

#include <cmath>

#include "gramcov/criteria.hpp"
#include "gramcov/special.hpp"
#include "gramcov/sphere.hpp"
#include "gramcov/verify.hpp"

using namespace gramcov;
using gramcov::testing::mat2;

TEST_CASE("sphere samples are unit norm and deterministic") {
    const SphereSampleSet s = sample_uniform_sphere(16, 500, 42);
    for (Index i = 0; i < s.count; ++i) {
        CHECK(std::abs(s.samples.col(i).norm() - 1.0) <= 1e-12);
    }
    const SphereSampleSet again = sample_uniform_sphere(16, 500, 42);
    CHECK((s.samples - again.samples).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(sample_uniform_sphere(1, 10, 0), InvalidArgument);
}

TEST_CASE("chunked sampling: a prefix of a larger draw matches the smaller draw") {
    // chunk-local seeding means the first chunk is identical regardless of n
    const SphereSampleSet small = sample_uniform_sphere(8, 100, 7);
    const SphereSampleSet large = sample_uniform_sphere(8, 5000, 7);
    CHECK((small.samples - large.samples.leftCols(100)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("per-coordinate means obey the CLT envelope") {
    const Index n = 100000;
    const SphereSampleSet s = sample_uniform_sphere(3, n, 11);
    const Vector means = s.samples.rowwise().mean();
    // per-coordinate variance is 1/M; allow 4 standard errors
    const double bound = 4.0 / std::sqrt(3.0 * static_cast<double>(n));
    for (Index d = 0; d < 3; ++d) CHECK(std::abs(means(d)) <= bound);
}

TEST_CASE("M=2 angles are uniform (chi-square)") {
    const Index n = 50000;
    const SphereSampleSet s = sample_uniform_sphere(2, n, 13);
    const int bins = 16;
    std::vector<double> counts(bins, 0.0);
    for (Index i = 0; i < n; ++i) {
        double angle = std::atan2(s.samples(1, i), s.samples(0, i));
        if (angle < 0) angle += 2.0 * M_PI;
        int b = static_cast<int>(angle / (2.0 * M_PI) * bins);
        if (b >= bins) b = bins - 1;
        counts[static_cast<std::size_t>(b)] += 1.0;
    }
    const double expected = static_cast<double>(n) / bins;
    double chi2 = 0.0;
    for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
    // chi-square with 15 dof: 0.01 critical value is 30.578
    CHECK(chi2 <= 30.578);
}

TEST_CASE("dot product statistics") {
    SUBCASE("M=2: variance near 1/2") {
        const SphereSampleSet s = sample_uniform_sphere(2, 200000, 17);
        const DotProductStats stats = dot_product_stats(s);
        CHECK(stats.n_pairs == 100000);
        // Var(s^2) bound, 5 standard errors (mu4 = 3/8 for the arcsine law)
        const double se = std::sqrt((3.0 / 8.0 - 0.25) / 1e5);
        CHECK(std::abs(stats.variance - 0.5) <= 5.0 * se);
    }
    SUBCASE("M=3: (x+1)/2 is uniform; KS passes at alpha=0.01") {
        const SphereSampleSet s = sample_uniform_sphere(3, 100000, 19);
        const DotProductStats stats = dot_product_stats(s);
        CHECK(stats.ks <= ks_critical_001(stats.n_pairs));
    }
    SUBCASE("M=128: mean and variance scales") {
        const SphereSampleSet s = sample_uniform_sphere(128, 100000, 23);
        const DotProductStats stats = dot_product_stats(s);
        const double n = static_cast<double>(stats.n_pairs);
        CHECK(std::abs(stats.mean) <= 3.0 * std::sqrt(1.0 / (128.0 * n)));
        CHECK(stats.variance == doctest::Approx(1.0 / 128.0).epsilon(0.05));
    }
    SUBCASE("all-pairs mode") {
        const SphereSampleSet s = sample_uniform_sphere(4, 100, 29);
        const DotProductStats stats = dot_product_stats(s, PairingMode::AllPairs);
        CHECK(stats.n_pairs == 100 * 99 / 2);
    }
}

TEST_CASE("verify_identity") {
    const Matrix K = mat2(1, 2, 3, 4);
    // both sides equal 892
    CHECK(l_nc(K) + row_norm_pow4_sum(K) == doctest::Approx(892.0));
    CHECK(l_c(K) + col_norm_pow4_sum(K) == doctest::Approx(892.0));
    const VerificationReport r = verify_identity(K);
    CHECK(r.pass);
    CHECK(r.residual <= 1e-14);

    Rng rng(31);
    const VerificationReport big = verify_identity(gen_gaussian(64, 256, rng));
    CHECK(big.pass);

    CHECK(verify_identity(Matrix::Zero(3, 4)).pass);
}

TEST_CASE("verify_doubly_normalized") {
    Rng rng(37);
    SUBCASE("sign matrices") {
        for (Index n : {2, 4, 8, 16}) {
            const VerificationReport r = verify_doubly_normalized(gen_sign_scaled(n, rng));
            CHECK(r.pass);
        }
    }
    SUBCASE("orthogonal matrices have zero criteria") {
        const Matrix Q = gen_orthogonal(6, rng);
        const VerificationReport r = verify_doubly_normalized(Q);
        CHECK(r.pass);
        CHECK(l_c(Q) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(l_nc(Q) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("column-only normalization is rejected") {
        const Matrix K = gen_column_normalized(3, 5, rng);
        CHECK_THROWS_AS(verify_doubly_normalized(K), NotDoublyNormalized);
    }
}

TEST_CASE("verify_norm_bounds") {
    SUBCASE("constant columns attain the lower bound") {
        const Matrix K = gen_constant_columns_normalized(2, 2);
        CHECK(row_norm_pow4_sum(K) == doctest::Approx(2.0).epsilon(1e-12));
        const VerificationReport r = verify_norm_bounds(K, NormMode::ColumnsNormalized);
        CHECK(r.pass);
    }
    SUBCASE("one-hot rows attain the upper bound") {
        Matrix K = gen_one_hot_rows(2, 2);
        CHECK(row_norm_pow4_sum(K) == doctest::Approx(4.0));
        CHECK(verify_norm_bounds(K, NormMode::ColumnsNormalized).pass);
    }
    SUBCASE("random normalized matrices sit strictly inside") {
        Rng rng(41);
        const Matrix K = gen_column_normalized(128, 512, rng);
        const VerificationReport r = verify_norm_bounds(K, NormMode::ColumnsNormalized);
        CHECK(r.pass);
        const NormInterplayRow row = norm_interplay_report(K, NormMode::ColumnsNormalized);
        CHECK(row.measured > row.lower);
        CHECK(row.measured < row.upper);
    }
    SUBCASE("row mode") {
        Rng rng(43);
        const Matrix K = gen_row_normalized(24, 10, rng);
        CHECK(verify_norm_bounds(K, NormMode::RowsNormalized).pass);
        CHECK(verify_norm_bounds(gen_constant_rows_normalized(6, 4), NormMode::RowsNormalized)
                  .pass);
        CHECK(verify_norm_bounds(gen_one_hot_cols(5, 7), NormMode::RowsNormalized).pass);
    }
    SUBCASE("unnormalized input is rejected") {
        Rng rng(47);
        CHECK_THROWS_AS(verify_norm_bounds(gen_gaussian(4, 6, rng), NormMode::ColumnsNormalized),
                        NotNormalized);
    }
}

TEST_CASE("verify_corollary_bounds") {
    Rng rng(53);
    for (int t = 0; t < 50; ++t) {
        const Matrix K = gen_column_normalized(3 + Index(rng.below(20)),
                                               3 + Index(rng.below(40)), rng);
        CHECK(verify_corollary_bounds(K, NormMode::ColumnsNormalized).pass);
    }
    for (int t = 0; t < 50; ++t) {
        const Matrix K =
            gen_row_normalized(3 + Index(rng.below(40)), 3 + Index(rng.below(20)), rng);
        CHECK(verify_corollary_bounds(K, NormMode::RowsNormalized).pass);
    }
    // boundary attainment at the norm-bound extremes
    CHECK(verify_corollary_bounds(gen_constant_columns_normalized(4, 6),
                                  NormMode::ColumnsNormalized)
              .pass);
    CHECK(verify_corollary_bounds(gen_one_hot_rows(4, 6), NormMode::ColumnsNormalized).pass);
    // orthonormal columns of a square matrix: everything is zero
    CHECK(verify_corollary_bounds(Matrix::Identity(5, 5), NormMode::ColumnsNormalized).pass);
}

TEST_CASE("norm interplay bound columns") {
    const NormInterplayRow wide = norm_interplay_bounds(8192, 1024, NormMode::ColumnsNormalized);
    CHECK(wide.lower == 128.0);
    CHECK(wide.upper == 1048576.0);
    const NormInterplayRow narrow = norm_interplay_bounds(512, 1024, NormMode::ColumnsNormalized);
    CHECK(narrow.lower == 2048.0);
    CHECK(narrow.upper == 1048576.0);

    // constant matrix measures exactly the lower bound
    const NormInterplayRow row = norm_interplay_report(gen_constant_columns_normalized(16, 32),
                                                       NormMode::ColumnsNormalized);
    CHECK(row.measured == doctest::Approx(row.lower).epsilon(1e-12));
}

TEST_CASE("verify_sphere_stats") {
    for (Index m : {2, 3, 16}) {
        const auto reports = verify_sphere_stats(m, 20000, 61);
        REQUIRE(reports.size() == 3);
        for (const auto& r : reports) {
            INFO(r.check, " residual=", r.residual, " tol=", r.tolerance);
            CHECK(r.pass);
        }
    }
}
