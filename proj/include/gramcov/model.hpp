#pragma once

#include <string>
#include <vector>

#include "gramcov/matrix.hpp"
#include "gramcov/rng.hpp"

namespace gramcov {

/// Encoder followed by a projector, all linear layers. Hidden layers carry
/// batch standardization and a rectifier; the final projector layer is a bare
/// linear map without bias, standardization or activation.
struct ModelSpec {
    std::vector<Index> encoder_widths{32, 64, 16};   // input -> ... -> R
    std::vector<Index> projector_widths{16, 16, 16};  // widths after R, last is M
    bool batchnorm = true;

    void validate() const;
    Index input_dim() const { return encoder_widths.front(); }
    Index representation_dim() const { return encoder_widths.back(); }
    Index embedding_dim() const { return projector_widths.back(); }
};

/// Projector widths for the shorthand shapes: "d-d-d", "2R-d", "4R-4R-d",
/// with d the embedding dimension and R the representation dimension.
std::vector<Index> projector_from_shape(const std::string& shape, Index R, Index d);

struct BatchNormParams {
    Vector gamma, beta, running_mean, running_var;
};

struct Layer {
    Matrix W;
    Vector b;
    bool has_bias = true;
    bool has_bn = true;
    bool has_relu = true;
    BatchNormParams bn;
};

struct Model {
    ModelSpec spec;
    std::vector<Layer> layers;
    std::size_t encoder_layers = 0;  // layers [0, encoder_layers) form the encoder
};

Model init_model(const ModelSpec& spec, Rng& rng);

/// Per-layer activations cached during the training forward pass.
struct LayerCache {
    Matrix input;
    Matrix xhat;      // standardized pre-activation (batchnorm layers)
    Vector batch_var;
    Matrix pre_relu;
};

struct ForwardCache {
    std::vector<LayerCache> layers;
    Matrix representations;
    Matrix embeddings;
};

/// Training-mode forward: batch statistics for standardization, running
/// averages updated in place.
ForwardCache forward_train(Model& model, const Matrix& batch);

/// Evaluation-mode forward using frozen running averages.
/// Returns (representations, embeddings).
std::pair<Matrix, Matrix> forward_eval(const Model& model, const Matrix& batch);

struct LayerGrads {
    Matrix dW;
    Vector db, dgamma, dbeta;
};

struct ModelGrads {
    std::vector<LayerGrads> layers;
};

ModelGrads zero_grads(const Model& model);

/// Backpropagates d(loss)/d(embeddings) through the cached forward pass,
/// accumulating into `grads`.
void backward(const Model& model, const ForwardCache& cache, const Matrix& d_embeddings,
              ModelGrads& grads);

inline constexpr double kBnEps = 1e-5;
inline constexpr double kBnMomentum = 0.1;

}  // namespace gramcov
