#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gramcov/criteria.hpp"
#include "gramcov/dataset.hpp"
#include "gramcov/model.hpp"
#include "gramcov/normalize.hpp"

namespace gramcov {

struct TrainConfig {
    std::string loss_id = "vicreg";
    LossParams params{};
    /// Normalization applied to embeddings before the loss; defaults to the
    /// loss's canonical input transform.
    std::optional<Scheme> normalization;
    Index batch_size = 128;
    int epochs = 40;
    double base_lr = 0.3;
    int warmup_epochs = 2;
    double weight_decay = 1e-6;
    double momentum = 0.9;
    std::uint64_t seed = 1;
    bool online_probe = true;
    double probe_lr = 0.1;
    Index export_count = 256;
    DatasetSpec dataset{};
    AugmentationConfig augment{};
    ModelSpec model{};

    /// lr scaling rule: effective lr = base_lr * batch_size / 256.
    double effective_lr() const { return base_lr * static_cast<double>(batch_size) / 256.0; }
    void validate() const;
    /// Strategy actually applied before the loss for a batch of this config.
    NormalizationStrategy resolved_strategy() const;
    std::string resolved_scheme_name() const;
};

struct EpochMetrics {
    int epoch = 0;
    double loss = 0.0;
    double invariance = 0.0;
    double variance = 0.0;
    double covariance = 0.0;
    double online_accuracy = 0.0;  // held-out accuracy at epoch end
};

struct LinearProbe {
    Matrix W;  // n_classes x feature_dim
    Vector b;
};

struct TrainRun {
    TrainConfig config;
    std::vector<EpochMetrics> history;
    Model model;
    LinearProbe probe;
    double final_online_accuracy = 0.0;
};

/// Deterministic full training run: shuffled minibatch SGD with momentum and
/// weight decay, linear warmup then cosine decay, analytic loss gradients
/// through the configured normalization, online probe on stop-gradient
/// representations. Throws DivergedLoss if the loss becomes non-finite.
TrainRun train(const TrainConfig& config, const SyntheticDataset& data);

LinearProbe make_probe(Index n_classes, Index feature_dim);

/// One multinomial-logistic SGD step on detached features; returns the
/// accuracy on this batch before the update.
double online_probe_step(LinearProbe& probe, const Matrix& features,
                         const std::vector<int>& labels, double lr, Matrix& velocity_W,
                         Vector& velocity_b, double momentum);

double probe_accuracy(const LinearProbe& probe, const Matrix& features,
                      const std::vector<int>& labels);

/// Fresh linear classifier trained to convergence on the given frozen
/// features (full-batch gradient descent with momentum and cosine decay).
LinearProbe train_linear_probe(const Matrix& features, const std::vector<int>& labels,
                               Index n_classes, int steps = 300, double lr = 0.5);

/// Offline evaluation protocol: train a fresh probe on frozen train-split
/// representations, report held-out accuracy.
double offline_probe(const Model& model, const SyntheticDataset& data, int steps = 300,
                     double lr = 0.5);

struct ExportedEmbeddings {
    Matrix embeddings;       // normalization scheme applied, matches training
    Matrix representations;  // centered, as used for diagnostics
};

/// Embeddings and centered representations for the first `count` training
/// samples, evaluation-mode forward.
ExportedEmbeddings export_embeddings(const Model& model, const SyntheticDataset& data,
                                     const NormalizationStrategy& strategy, Index count);

// Frozen desk-scale defaults: the synthetic task, per-method tuned
// hyperparameters and the seed set used by the verification suites.
DatasetSpec default_task();
ModelSpec default_model(Index embedding_dim, const std::string& projector_shape = "d-d-d");
TrainConfig default_config(const std::string& loss_id, Index embedding_dim = 16);
const std::vector<std::uint64_t>& default_seed_set();

}  // namespace gramcov
