#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gramcov/errors.hpp"
#include "gramcov/rng.hpp"
#include "gramcov/special.hpp"

using namespace gramcov;

TEST_CASE("beta cdf closed forms") {
    // Beta(1, 1) is uniform
    for (double x : {0.0, 0.1, 0.25, 0.5, 0.77, 1.0}) {
        CHECK(beta_cdf(x, 1.0, 1.0) == doctest::Approx(x).epsilon(1e-13));
    }
    // Beta(1/2, 1/2) is the arcsine law: CDF = (2/pi) asin(sqrt(x))
    for (double x : {0.05, 0.3, 0.5, 0.9}) {
        const double expected = 2.0 / M_PI * std::asin(std::sqrt(x));
        CHECK(beta_cdf(x, 0.5, 0.5) == doctest::Approx(expected).epsilon(1e-12));
    }
    // Beta(2, 1): CDF = x^2
    CHECK(beta_cdf(0.4, 2.0, 1.0) == doctest::Approx(0.16).epsilon(1e-12));
}

TEST_CASE("beta cdf symmetry and edges") {
    for (double a : {0.5, 1.5, 7.5, 63.5}) {
        CHECK(beta_cdf(0.5, a, a) == doctest::Approx(0.5).epsilon(1e-12));
        for (double x : {0.1, 0.33, 0.478}) {
            CHECK(beta_cdf(x, a, a) ==
                  doctest::Approx(1.0 - beta_cdf(1.0 - x, a, a)).epsilon(1e-11));
        }
    }
    CHECK(beta_cdf(0.0, 2.0, 3.0) == 0.0);
    CHECK(beta_cdf(1.0, 2.0, 3.0) == 1.0);
    CHECK_THROWS_AS(beta_cdf(0.5, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("beta cdf is monotone for large symmetric parameters") {
    double prev = 0.0;
    for (int i = 1; i <= 100; ++i) {
        const double x = static_cast<double>(i) / 101.0;
        const double v = beta_cdf(x, 63.5, 63.5);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("ks statistic on exact uniform grid") {
    // samples at (i - 0.5)/n against the uniform CDF give D = 1/(2n)
    std::vector<double> grid;
    const int n = 100;
    for (int i = 1; i <= n; ++i) grid.push_back((i - 0.5) / n);
    const double d = ks_statistic(grid, [](double x) { return x; });
    CHECK(d == doctest::Approx(0.005).epsilon(1e-12));
}

TEST_CASE("ks detects a wrong distribution") {
    Rng rng(4);
    std::vector<double> samples;
    for (int i = 0; i < 2000; ++i) samples.push_back(rng.uniform() * 0.5);  // U[0, 0.5]
    const double d = ks_statistic(samples, [](double x) { return x; });
    CHECK(d > ks_critical_001(samples.size()));
}

TEST_CASE("ks critical value formula") {
    CHECK(ks_critical_001(100000) == doctest::Approx(1.628 / std::sqrt(1e5)));
}
