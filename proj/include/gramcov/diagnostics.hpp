#pragma once

#include <cstddef>
#include <vector>

#include "gramcov/matrix.hpp"

namespace gramcov {

/// Singular values of K in descending order, via an eigendecomposition of
/// the smaller Gramian. Round-off negatives are clamped to zero.
std::vector<double> singular_spectrum(const Matrix& K);

struct Histogram {
    std::vector<double> edges;        // bins + 1 monotone edges over [-1, 1]
    std::vector<std::size_t> counts;  // one per bin
    double mean = 0.0;
    double stddev = 0.0;              // population std over the pair values
    std::size_t total = 0;
};

/// Histogram of off-diagonal cosine similarities over all column pairs
/// (i < j). Throws ZeroNormColumn.
Histogram cosine_similarity_histogram(const Matrix& K, std::size_t bins);

struct MatrixPanel {
    Matrix gram_head;        // leading k x k block of the Gram matrix
    Matrix covariance_head;  // leading k x k block of the sample covariance
    double gram_ratio = 0.0;        // mean |off-diag| / mean |diag|
    double covariance_ratio = 0.0;
};

/// Leading k x k blocks of gram and covariance_sample with their
/// diagonal-dominance ratios. Requires k <= min(M, N).
MatrixPanel matrix_panel(const Matrix& K, Index k);

/// Number of singular values >= threshold * largest. Threshold in (0, 1).
Index effective_rank(const Matrix& K, double threshold);

}  // namespace gramcov
