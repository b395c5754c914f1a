#include "gramcov/sphere.hpp"

#include <cmath>

#include "gramcov/rng.hpp"
#include "gramcov/special.hpp"

namespace gramcov {

namespace {

constexpr Index kChunk = 4096;

}

SphereSampleSet sample_uniform_sphere(Index M, Index n, std::uint64_t seed) {
    if (M < 2) throw InvalidArgument("sphere sampling requires dimension >= 2");
    if (n < 1) throw InvalidArgument("sphere sampling requires at least one sample");
    SphereSampleSet out;
    out.dimension = M;
    out.count = n;
    out.seed = seed;
    out.samples.resize(M, n);
    for (Index start = 0; start < n; start += kChunk) {
        const Index stop = std::min(n, start + kChunk);
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(start / kChunk)));
        for (Index i = start; i < stop; ++i) {
            Vector v(M);
            do {
                for (Index j = 0; j < M; ++j) v(j) = rng.normal();
            } while (v.norm() <= 1e-12);
            out.samples.col(i) = v / v.norm();
        }
    }
    return out;
}

DotProductStats dot_product_stats(const SphereSampleSet& s, PairingMode mode) {
    if (s.count < 2) throw InvalidArgument("dot_product_stats requires at least two samples");
    std::vector<double> dots;
    if (mode == PairingMode::Disjoint) {
        dots.reserve(static_cast<std::size_t>(s.count / 2));
        for (Index i = 0; i + 1 < s.count; i += 2) {
            dots.push_back(s.samples.col(i).dot(s.samples.col(i + 1)));
        }
    } else {
        dots.reserve(static_cast<std::size_t>(s.count) * (s.count - 1) / 2);
        for (Index i = 0; i < s.count; ++i) {
            for (Index j = i + 1; j < s.count; ++j) {
                dots.push_back(s.samples.col(i).dot(s.samples.col(j)));
            }
        }
    }

    DotProductStats stats;
    stats.n_pairs = dots.size();
    double sum = 0.0;
    for (double d : dots) sum += d;
    stats.mean = sum / static_cast<double>(dots.size());
    double ss = 0.0;
    for (double d : dots) ss += (d - stats.mean) * (d - stats.mean);
    stats.variance = dots.size() > 1 ? ss / static_cast<double>(dots.size() - 1) : 0.0;

    const double a = (static_cast<double>(s.dimension) - 1.0) / 2.0;
    std::vector<double> mapped(dots.size());
    for (std::size_t i = 0; i < dots.size(); ++i) mapped[i] = (dots[i] + 1.0) / 2.0;
    stats.ks = ks_statistic(std::move(mapped), [a](double x) { return beta_cdf(x, a, a); });
    return stats;
}

}  // namespace gramcov
