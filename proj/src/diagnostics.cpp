#include "gramcov/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "gramcov/normalize.hpp"

namespace gramcov {

std::vector<double> singular_spectrum(const Matrix& K) {
    validate_embedding(K);
    const bool use_gram = K.cols() <= K.rows();
    const Matrix G = use_gram ? Matrix(K.transpose() * K) : Matrix(K * K.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(G, Eigen::EigenvaluesOnly);
    std::vector<double> sigma(static_cast<std::size_t>(G.rows()));
    for (Index i = 0; i < G.rows(); ++i) {
        sigma[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, es.eigenvalues()(i)));
    }
    std::sort(sigma.begin(), sigma.end(), std::greater<>());
    return sigma;
}

Histogram cosine_similarity_histogram(const Matrix& K, std::size_t bins) {
    validate_embedding(K);
    if (bins == 0) throw InvalidArgument("histogram needs at least one bin");
    if (K.cols() < 2) throw InvalidArgument("histogram needs at least two columns");
    const Matrix unit = l2_normalize_embeddings(K);
    const Matrix G = unit.transpose() * unit;

    Histogram h;
    h.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) {
        h.edges[b] = -1.0 + 2.0 * static_cast<double>(b) / static_cast<double>(bins);
    }
    h.counts.assign(bins, 0);

    double sum = 0.0, sum_sq = 0.0;
    for (Index i = 0; i < G.rows(); ++i) {
        for (Index j = i + 1; j < G.cols(); ++j) {
            const double v = std::clamp(G(i, j), -1.0, 1.0);
            sum += v;
            sum_sq += v * v;
            auto bin = static_cast<std::size_t>((v + 1.0) / 2.0 * static_cast<double>(bins));
            if (bin >= bins) bin = bins - 1;  // v == 1 lands in the last bin
            ++h.counts[bin];
            ++h.total;
        }
    }
    const double n = static_cast<double>(h.total);
    h.mean = sum / n;
    h.stddev = std::sqrt(std::max(0.0, sum_sq / n - h.mean * h.mean));
    return h;
}

namespace {

double dominance_ratio(const Matrix& A) {
    double diag = 0.0, off = 0.0;
    for (Index i = 0; i < A.rows(); ++i) {
        for (Index j = 0; j < A.cols(); ++j) {
            if (i == j) {
                diag += std::abs(A(i, j));
            } else {
                off += std::abs(A(i, j));
            }
        }
    }
    const double n = static_cast<double>(A.rows());
    const double mean_diag = diag / n;
    const double mean_off = A.rows() > 1 ? off / (n * (n - 1.0)) : 0.0;
    return mean_diag > 0.0 ? mean_off / mean_diag : 0.0;
}

}  // namespace

MatrixPanel matrix_panel(const Matrix& K, Index k) {
    validate_embedding(K);
    if (k < 1 || k > std::min(K.rows(), K.cols())) {
        throw InvalidArgument("panel size must be in [1, min(M, N)]");
    }
    MatrixPanel panel;
    panel.gram_head = gram(K).topLeftCorner(k, k);
    panel.covariance_head = covariance_sample(K).topLeftCorner(k, k);
    panel.gram_ratio = dominance_ratio(panel.gram_head);
    panel.covariance_ratio = dominance_ratio(panel.covariance_head);
    return panel;
}

Index effective_rank(const Matrix& K, double threshold) {
    if (threshold <= 0.0 || threshold >= 1.0) {
        throw InvalidArgument("threshold must be in (0, 1)");
    }
    const std::vector<double> sigma = singular_spectrum(K);
    if (sigma.empty() || sigma.front() <= 0.0) return 0;
    const double cut = threshold * sigma.front();
    Index count = 0;
    for (double s : sigma) {
        if (s >= cut) ++count;
    }
    return count;
}

}  // namespace gramcov
