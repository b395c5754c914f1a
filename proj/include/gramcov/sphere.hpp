#pragma once

#include <cstdint>

#include "gramcov/matrix.hpp"

namespace gramcov {

/// A set of unit vectors drawn uniformly from the hypersphere S^{M-1},
/// stored as columns of an M x n matrix.
struct SphereSampleSet {
    Index dimension = 0;
    Index count = 0;
    std::uint64_t seed = 0;
    Matrix samples;
};

/// How dot-product statistics pair up the samples. Disjoint pairs
/// (1,2), (3,4), ... are independent; all-pairs shares vectors across pairs
/// and is kept for exploratory use only.
enum class PairingMode { Disjoint, AllPairs };

struct DotProductStats {
    double mean = 0.0;
    double variance = 0.0;  // unbiased sample variance
    double ks = 0.0;        // KS distance of (x+1)/2 against Beta((M-1)/2, (M-1)/2)
    std::size_t n_pairs = 0;
};

/// n i.i.d. uniform unit vectors via normalized standard Gaussians.
/// Sampling is chunked with per-chunk seeds derived from `seed`, so results
/// are reproducible independently of how chunks are scheduled. M >= 2.
SphereSampleSet sample_uniform_sphere(Index M, Index n, std::uint64_t seed);

/// Dot-product statistics over pairs of samples. Requires n >= 2.
DotProductStats dot_product_stats(const SphereSampleSet& s,
                                  PairingMode mode = PairingMode::Disjoint);

}  // namespace gramcov
