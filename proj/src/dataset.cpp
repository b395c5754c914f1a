#include "gramcov/dataset.hpp"

#include <numeric>

#include "gramcov/sphere.hpp"

namespace gramcov {

void DatasetSpec::validate() const {
    if (n_samples < 2 || input_dim < 2 || n_classes < 2) {
        throw InvalidArgument("dataset needs n_samples, input_dim, n_classes >= 2");
    }
    if (n_classes > n_samples) throw InvalidArgument("more classes than samples");
    if (class_radius <= 0.0 || sigma_class < 0.0) {
        throw InvalidArgument("class_radius must be positive and sigma_class non-negative");
    }
    if (holdout_fraction < 0.0 || holdout_fraction >= 1.0) {
        throw InvalidArgument("holdout_fraction must be in [0, 1)");
    }
}

SyntheticDataset generate_dataset(const DatasetSpec& spec) {
    spec.validate();
    SyntheticDataset data;
    data.spec = spec;

    const SphereSampleSet means =
        sample_uniform_sphere(spec.input_dim, spec.n_classes, derive_seed(spec.seed, 0));
    data.class_means = spec.class_radius * means.samples;

    Rng rng(derive_seed(spec.seed, 1));
    data.inputs.resize(spec.input_dim, spec.n_samples);
    data.labels.resize(static_cast<std::size_t>(spec.n_samples));
    for (Index i = 0; i < spec.n_samples; ++i) {
        const int label = static_cast<int>(i % spec.n_classes);
        data.labels[static_cast<std::size_t>(i)] = label;
        for (Index d = 0; d < spec.input_dim; ++d) {
            data.inputs(d, i) = data.class_means(d, label) + spec.sigma_class * rng.normal();
        }
    }

    std::vector<Index> order(static_cast<std::size_t>(spec.n_samples));
    std::iota(order.begin(), order.end(), Index{0});
    Rng split_rng(derive_seed(spec.seed, 2));
    split_rng.shuffle(order.begin(), order.end());
    const auto holdout =
        static_cast<std::size_t>(static_cast<double>(spec.n_samples) * spec.holdout_fraction);
    data.holdout_indices.assign(order.begin(), order.begin() + holdout);
    data.train_indices.assign(order.begin() + holdout, order.end());
    return data;
}

void AugmentationConfig::validate() const {
    if (sigma_noise < 0.0) throw InvalidArgument("sigma_noise must be non-negative");
    if (!(0.0 < scale_lo && scale_lo <= scale_hi)) {
        throw InvalidArgument("scale jitter range must satisfy 0 < lo <= hi");
    }
    if (dropout_p < 0.0 || dropout_p >= 1.0) {
        throw InvalidArgument("dropout probability must be in [0, 1)");
    }
}

Vector augment_one(const Vector& x, const AugmentationConfig& cfg, Rng& rng) {
    const double scale =
        cfg.scale_lo == cfg.scale_hi ? cfg.scale_lo : rng.uniform(cfg.scale_lo, cfg.scale_hi);
    Vector view = scale * x;
    if (cfg.sigma_noise > 0.0) {
        for (Index d = 0; d < view.size(); ++d) view(d) += cfg.sigma_noise * rng.normal();
    }
    if (cfg.dropout_p > 0.0) {
        for (Index d = 0; d < view.size(); ++d) {
            if (rng.uniform() < cfg.dropout_p) view(d) = 0.0;
        }
    }
    return view;
}

std::pair<Vector, Vector> augment(const Vector& x, const AugmentationConfig& cfg, Rng& rng) {
    cfg.validate();
    Vector a = augment_one(x, cfg, rng);
    Vector b = augment_one(x, cfg, rng);
    return {std::move(a), std::move(b)};
}

Matrix gather_columns(const Matrix& X, const std::vector<Index>& indices) {
    Matrix out(X.rows(), static_cast<Index>(indices.size()));
    for (std::size_t i = 0; i < indices.size(); ++i) {
        out.col(static_cast<Index>(i)) = X.col(indices[i]);
    }
    return out;
}

std::vector<int> gather_labels(const std::vector<int>& labels,
                               const std::vector<Index>& indices) {
    std::vector<int> out(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        out[i] = labels[static_cast<std::size_t>(indices[i])];
    }
    return out;
}

}  // namespace gramcov
