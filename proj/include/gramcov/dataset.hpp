#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gramcov/matrix.hpp"
#include "gramcov/rng.hpp"

namespace gramcov {

/// Gaussian class clusters with means on a sphere; the desk-scale stand-in
/// for an image dataset.
struct DatasetSpec {
    Index n_samples = 2000;
    Index input_dim = 32;
    Index n_classes = 8;
    double class_radius = 5.0;  // class means are drawn on a sphere of this radius
    double sigma_class = 1.0;   // within-class spread
    double holdout_fraction = 0.2;
    std::uint64_t seed = 7;

    void validate() const;
};

struct SyntheticDataset {
    DatasetSpec spec;
    Matrix inputs;  // input_dim x n_samples, columns are samples
    std::vector<int> labels;
    Matrix class_means;  // input_dim x n_classes
    std::vector<Index> train_indices;
    std::vector<Index> holdout_indices;
};

/// Deterministic per spec.seed; labels are balanced within one sample.
SyntheticDataset generate_dataset(const DatasetSpec& spec);

/// Vector augmentations standing in for image augmentations: multiplicative
/// scale jitter, additive Gaussian noise, per-coordinate dropout.
struct AugmentationConfig {
    double sigma_noise = 0.3;
    double scale_lo = 0.9;
    double scale_hi = 1.1;
    double dropout_p = 0.05;

    void validate() const;
};

/// One augmented view of x.
Vector augment_one(const Vector& x, const AugmentationConfig& cfg, Rng& rng);

/// Two independent views drawn from the same augmentation distribution.
std::pair<Vector, Vector> augment(const Vector& x, const AugmentationConfig& cfg, Rng& rng);

Matrix gather_columns(const Matrix& X, const std::vector<Index>& indices);
std::vector<int> gather_labels(const std::vector<int>& labels, const std::vector<Index>& indices);

}  // namespace gramcov
