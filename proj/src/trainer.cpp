#include "gramcov/trainer.hpp"

#include <cmath>
#include <numeric>

#include "gramcov/gradients.hpp"

namespace gramcov {

void TrainConfig::validate() const {
    loss_info(loss_id);
    params.weights.validate();
    if (batch_size < 2) throw InvalidArgument("batch_size must be at least 2");
    if (epochs < 1) throw InvalidArgument("epochs must be positive");
    if (warmup_epochs < 0 || warmup_epochs > epochs) {
        throw InvalidArgument("warmup_epochs must be in [0, epochs]");
    }
    if (base_lr < 0.0) throw InvalidArgument("base_lr must be non-negative");
    if (momentum < 0.0 || momentum >= 1.0) throw InvalidArgument("momentum must be in [0, 1)");
    if (weight_decay < 0.0) throw InvalidArgument("weight_decay must be non-negative");
    dataset.validate();
    augment.validate();
    model.validate();
    if (model.input_dim() != dataset.input_dim) {
        throw InvalidArgument("model input width does not match dataset input_dim");
    }
}

NormalizationStrategy TrainConfig::resolved_strategy() const {
    const Index M = model.embedding_dim();
    if (normalization) return resolve_scheme(*normalization, M, batch_size);
    return transform_strategy(loss_info(loss_id).canonical, M, batch_size);
}

std::string TrainConfig::resolved_scheme_name() const {
    if (normalization) return scheme_to_string(*normalization);
    switch (loss_info(loss_id).canonical) {
        case InputTransform::None: return "none";
        case InputTransform::L2Columns: return "classical";
        case InputTransform::BtStandardize: return "bt-standardize";
    }
    return "none";
}

namespace {

/// Linear warmup to the effective lr, then cosine decay to zero.
double schedule_lr(double effective_lr, long step, long warmup_steps, long total_steps) {
    if (warmup_steps > 0 && step < warmup_steps) {
        return effective_lr * static_cast<double>(step + 1) / static_cast<double>(warmup_steps);
    }
    const long remaining = total_steps - warmup_steps;
    if (remaining <= 0) return effective_lr;
    const double progress =
        static_cast<double>(step - warmup_steps) / static_cast<double>(remaining);
    return effective_lr * 0.5 * (1.0 + std::cos(M_PI * progress));
}

struct SgdState {
    std::vector<LayerGrads> velocity;
};

SgdState make_sgd_state(const Model& model) { return {zero_grads(model).layers}; }

void sgd_step(Model& model, const ModelGrads& grads, SgdState& state, double lr,
              double momentum, double weight_decay) {
    for (std::size_t li = 0; li < model.layers.size(); ++li) {
        Layer& layer = model.layers[li];
        const LayerGrads& g = grads.layers[li];
        LayerGrads& v = state.velocity[li];

        // Weight decay on linear weights only, the usual pretraining split.
        v.dW = momentum * v.dW + (g.dW + weight_decay * layer.W);
        layer.W -= lr * v.dW;
        if (layer.has_bias) {
            v.db = momentum * v.db + g.db;
            layer.b -= lr * v.db;
        }
        if (layer.has_bn) {
            v.dgamma = momentum * v.dgamma + g.dgamma;
            v.dbeta = momentum * v.dbeta + g.dbeta;
            layer.bn.gamma -= lr * v.dgamma;
            layer.bn.beta -= lr * v.dbeta;
        }
    }
}

Matrix class_scores(const LinearProbe& probe, const Matrix& features) {
    Matrix logits = probe.W * features;
    logits.colwise() += probe.b;
    return logits;
}

/// Softmax cross-entropy gradient: probabilities minus one-hot, averaged.
void probe_gradient(const LinearProbe& probe, const Matrix& features,
                    const std::vector<int>& labels, Matrix& dW, Vector& db, double* accuracy) {
    const Index n = features.cols();
    Matrix logits = class_scores(probe, features);
    Index correct = 0;
    for (Index i = 0; i < n; ++i) {
        Index argmax = 0;
        logits.col(i).maxCoeff(&argmax);
        if (static_cast<int>(argmax) == labels[static_cast<std::size_t>(i)]) ++correct;
        const double m = logits.col(i).maxCoeff();
        Vector p = (logits.col(i).array() - m).exp();
        p /= p.sum();
        p(labels[static_cast<std::size_t>(i)]) -= 1.0;
        logits.col(i) = p;  // reuse storage for the error signal
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    dW = inv_n * (logits * features.transpose());
    db = inv_n * logits.rowwise().sum();
    if (accuracy) *accuracy = static_cast<double>(correct) / static_cast<double>(n);
}

}  // namespace

LinearProbe make_probe(Index n_classes, Index feature_dim) {
    return {Matrix::Zero(n_classes, feature_dim), Vector::Zero(n_classes)};
}

double online_probe_step(LinearProbe& probe, const Matrix& features,
                         const std::vector<int>& labels, double lr, Matrix& velocity_W,
                         Vector& velocity_b, double momentum) {
    Matrix dW;
    Vector db;
    double accuracy = 0.0;
    probe_gradient(probe, features, labels, dW, db, &accuracy);
    velocity_W = momentum * velocity_W + dW;
    velocity_b = momentum * velocity_b + db;
    probe.W -= lr * velocity_W;
    probe.b -= lr * velocity_b;
    return accuracy;
}

double probe_accuracy(const LinearProbe& probe, const Matrix& features,
                      const std::vector<int>& labels) {
    const Matrix logits = class_scores(probe, features);
    Index correct = 0;
    for (Index i = 0; i < features.cols(); ++i) {
        Index argmax = 0;
        logits.col(i).maxCoeff(&argmax);
        if (static_cast<int>(argmax) == labels[static_cast<std::size_t>(i)]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(features.cols());
}

LinearProbe train_linear_probe(const Matrix& features, const std::vector<int>& labels,
                               Index n_classes, int steps, double lr) {
    LinearProbe probe = make_probe(n_classes, features.rows());
    Matrix vel_W = Matrix::Zero(probe.W.rows(), probe.W.cols());
    Vector vel_b = Vector::Zero(probe.b.size());
    Matrix dW;
    Vector db;
    for (int step = 0; step < steps; ++step) {
        const double step_lr =
            lr * 0.5 * (1.0 + std::cos(M_PI * static_cast<double>(step) / steps));
        probe_gradient(probe, features, labels, dW, db, nullptr);
        vel_W = 0.9 * vel_W + dW;
        vel_b = 0.9 * vel_b + db;
        probe.W -= step_lr * vel_W;
        probe.b -= step_lr * vel_b;
    }
    return probe;
}

double offline_probe(const Model& model, const SyntheticDataset& data, int steps, double lr) {
    const Matrix train_inputs = gather_columns(data.inputs, data.train_indices);
    const std::vector<int> train_labels = gather_labels(data.labels, data.train_indices);
    const Matrix train_reps = forward_eval(model, train_inputs).first;
    const LinearProbe probe =
        train_linear_probe(train_reps, train_labels, data.spec.n_classes, steps, lr);

    const Matrix holdout_inputs = gather_columns(data.inputs, data.holdout_indices);
    const std::vector<int> holdout_labels = gather_labels(data.labels, data.holdout_indices);
    const Matrix holdout_reps = forward_eval(model, holdout_inputs).first;
    return probe_accuracy(probe, holdout_reps, holdout_labels);
}

TrainRun train(const TrainConfig& config, const SyntheticDataset& data) {
    config.validate();
    if (data.spec.input_dim != config.model.input_dim()) {
        throw InvalidArgument("dataset input_dim does not match model");
    }
    const std::size_t n_train = data.train_indices.size();
    if (n_train < static_cast<std::size_t>(config.batch_size)) {
        throw InvalidArgument("train split smaller than one batch");
    }

    Rng init_rng(derive_seed(config.seed, 0));
    Rng shuffle_rng(derive_seed(config.seed, 1));
    Rng augment_rng(derive_seed(config.seed, 2));

    TrainRun run;
    run.config = config;
    run.model = init_model(config.model, init_rng);
    SgdState sgd = make_sgd_state(run.model);

    run.probe = make_probe(data.spec.n_classes, config.model.representation_dim());
    Matrix probe_vel_W = Matrix::Zero(run.probe.W.rows(), run.probe.W.cols());
    Vector probe_vel_b = Vector::Zero(run.probe.b.size());

    const NormalizationStrategy strategy = config.resolved_strategy();
    const long steps_per_epoch = static_cast<long>(n_train) / config.batch_size;
    const long total_steps = steps_per_epoch * config.epochs;
    const long warmup_steps = steps_per_epoch * config.warmup_epochs;
    const double effective_lr = config.effective_lr();

    const Matrix holdout_inputs = gather_columns(data.inputs, data.holdout_indices);
    const std::vector<int> holdout_labels = gather_labels(data.labels, data.holdout_indices);

    std::vector<Index> order(data.train_indices);
    Matrix view_a(data.spec.input_dim, config.batch_size);
    Matrix view_b(data.spec.input_dim, config.batch_size);
    std::vector<int> batch_labels(static_cast<std::size_t>(config.batch_size));

    long step_idx = 0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle_rng.shuffle(order.begin(), order.end());
        EpochMetrics metrics;
        metrics.epoch = epoch;
        long batches = 0;

        for (long batch = 0; batch < steps_per_epoch; ++batch) {
            const double lr = schedule_lr(effective_lr, step_idx, warmup_steps, total_steps);
            for (Index i = 0; i < config.batch_size; ++i) {
                const Index sample = order[static_cast<std::size_t>(batch * config.batch_size + i)];
                auto views = augment(data.inputs.col(sample), config.augment, augment_rng);
                view_a.col(i) = views.first;
                view_b.col(i) = views.second;
                batch_labels[static_cast<std::size_t>(i)] =
                    data.labels[static_cast<std::size_t>(sample)];
            }

            ForwardCache fa = forward_train(run.model, view_a);
            ForwardCache fb = forward_train(run.model, view_b);
            if (!fa.embeddings.allFinite() || !fb.embeddings.allFinite()) {
                throw DivergedLoss("embeddings diverged at epoch " + std::to_string(epoch),
                                   epoch);
            }
            Matrix Za, Zb;
            try {
                Za = apply(strategy, fa.embeddings);
                Zb = apply(strategy, fb.embeddings);
            } catch (const Error& e) {
                // A dead column or row under the scheme means the run collapsed.
                throw DivergedLoss(std::string(e.what()) + " at epoch " +
                                       std::to_string(epoch),
                                   epoch);
            }

            const LossValue loss = evaluate_core(config.loss_id, Za, Zb, config.params);
            if (!std::isfinite(loss.value)) {
                throw DivergedLoss("loss diverged at epoch " + std::to_string(epoch), epoch);
            }
            GradPair dz = detail::grad_core(config.loss_id, Za, Zb, config.params);
            const Matrix dKa = apply_vjp(strategy, fa.embeddings, dz.dK);

            ModelGrads grads = zero_grads(run.model);
            backward(run.model, fa, dKa, grads);
            if (dz.dKp) {  // single-branch losses ignore the second view
                const Matrix dKb = apply_vjp(strategy, fb.embeddings, *dz.dKp);
                backward(run.model, fb, dKb, grads);
            }
            sgd_step(run.model, grads, sgd, lr, config.momentum, config.weight_decay);

            if (config.online_probe) {
                online_probe_step(run.probe, fa.representations, batch_labels, config.probe_lr,
                                  probe_vel_W, probe_vel_b, config.momentum);
            }

            metrics.loss += loss.value;
            if (auto it = loss.breakdown.find("invariance"); it != loss.breakdown.end()) {
                metrics.invariance += it->second;
            }
            if (auto it = loss.breakdown.find("variance"); it != loss.breakdown.end()) {
                metrics.variance += it->second;
            }
            if (auto it = loss.breakdown.find("covariance"); it != loss.breakdown.end()) {
                metrics.covariance += it->second;
            }
            ++batches;
            ++step_idx;
        }

        metrics.loss /= static_cast<double>(batches);
        metrics.invariance /= static_cast<double>(batches);
        metrics.variance /= static_cast<double>(batches);
        metrics.covariance /= static_cast<double>(batches);
        if (config.online_probe && !data.holdout_indices.empty()) {
            const Matrix reps = forward_eval(run.model, holdout_inputs).first;
            metrics.online_accuracy = probe_accuracy(run.probe, reps, holdout_labels);
        }
        run.history.push_back(metrics);
    }
    run.final_online_accuracy =
        run.history.empty() ? 0.0 : run.history.back().online_accuracy;
    return run;
}

ExportedEmbeddings export_embeddings(const Model& model, const SyntheticDataset& data,
                                     const NormalizationStrategy& strategy, Index count) {
    if (count < 1 || static_cast<std::size_t>(count) > data.train_indices.size()) {
        throw InvalidArgument("export count exceeds the train split");
    }
    std::vector<Index> subset(data.train_indices.begin(), data.train_indices.begin() + count);
    const Matrix inputs = gather_columns(data.inputs, subset);
    auto [reps, emb] = forward_eval(model, inputs);
    ExportedEmbeddings out;
    out.embeddings = apply(strategy, emb);
    // The trailing rectifier keeps representations in the positive orthant;
    // centering makes their panels interpretable.
    out.representations = reps.colwise() - reps.rowwise().mean();
    return out;
}

DatasetSpec default_task() {
    DatasetSpec spec;
    spec.n_samples = 2000;
    spec.input_dim = 32;
    spec.n_classes = 8;
    spec.class_radius = 5.0;
    spec.sigma_class = 1.0;
    spec.holdout_fraction = 0.2;
    spec.seed = 7;
    return spec;
}

ModelSpec default_model(Index embedding_dim, const std::string& projector_shape) {
    ModelSpec spec;
    spec.encoder_widths = {32, 64, 16};
    spec.projector_widths = projector_from_shape(projector_shape, 16, embedding_dim);
    spec.batchnorm = true;
    return spec;
}

TrainConfig default_config(const std::string& loss_id, Index embedding_dim) {
    TrainConfig config;
    config.loss_id = loss_id;
    config.dataset = default_task();
    config.model = default_model(embedding_dim);
    config.batch_size = 128;
    config.epochs = 40;
    config.warmup_epochs = 2;
    config.weight_decay = 1e-6;
    config.momentum = 0.9;

    // Desk-scale hyperparameters from the documented sweep (docs/tuning.md).
    if (loss_id == "vicreg" || loss_id == "vicreg-ctr-rewrite") {
        config.base_lr = 0.05;
        config.params.weights = {25.0, 25.0, 1.0};
    } else if (loss_id == "vicreg-exp") {
        config.base_lr = 0.05;
        config.params.weights = {25.0, 25.0, 1.0};
        config.params.tau = 0.1;
    } else if (loss_id == "vicreg-ctr") {
        config.base_lr = 0.1;
        config.params.weights = {1.0, 1.0, 1.0};
        config.params.tau = 1.0;
    } else if (loss_id.rfind("simclr", 0) == 0 || loss_id.rfind("dcl", 0) == 0) {
        config.base_lr = 0.05;
        config.params.tau = 0.5;
    } else if (loss_id == "scl") {
        // The attractive term is unbounded on raw embeddings; train on the
        // unit sphere as the original method does.
        config.base_lr = 0.05;
        config.normalization = Scheme::Classical;
    } else if (loss_id == "barlow-twins") {
        config.base_lr = 0.05;
        config.params.lambda_bt = 5e-3;
    } else if (loss_id == "tcr") {
        config.base_lr = 0.05;
        config.params.alpha = static_cast<double>(embedding_dim);
    } else {
        loss_info(loss_id);  // throws on unknown ids
    }
    return config;
}

const std::vector<std::uint64_t>& default_seed_set() {
    static const std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    return seeds;
}

}  // namespace gramcov
