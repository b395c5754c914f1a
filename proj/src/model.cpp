#include "gramcov/model.hpp"

#include <cmath>

namespace gramcov {

void ModelSpec::validate() const {
    if (encoder_widths.size() < 2) throw InvalidArgument("encoder needs at least one layer");
    if (projector_widths.empty()) throw InvalidArgument("projector needs at least one width");
    for (Index w : encoder_widths) {
        if (w < 1) throw InvalidArgument("encoder widths must be positive");
    }
    for (Index w : projector_widths) {
        if (w < 1) throw InvalidArgument("projector widths must be positive");
    }
}

std::vector<Index> projector_from_shape(const std::string& shape, Index R, Index d) {
    if (shape == "d-d-d") return {d, d, d};
    if (shape == "2R-d") return {2 * R, d};
    if (shape == "4R-4R-d") return {4 * R, 4 * R, d};
    throw InvalidArgument("unknown projector shape: " + shape +
                          " (expected d-d-d, 2R-d or 4R-4R-d)");
}

namespace {

Layer make_layer(Index in, Index out, bool bias, bool bn, bool relu, Rng& rng) {
    Layer layer;
    layer.W.resize(out, in);
    const double stddev = std::sqrt(2.0 / static_cast<double>(in));
    for (Index j = 0; j < in; ++j) {
        for (Index i = 0; i < out; ++i) layer.W(i, j) = stddev * rng.normal();
    }
    layer.has_bias = bias;
    layer.b = Vector::Zero(bias ? out : 0);
    layer.has_bn = bn;
    layer.has_relu = relu;
    if (bn) {
        layer.bn.gamma = Vector::Ones(out);
        layer.bn.beta = Vector::Zero(out);
        layer.bn.running_mean = Vector::Zero(out);
        layer.bn.running_var = Vector::Ones(out);
    }
    return layer;
}

}  // namespace

Model init_model(const ModelSpec& spec, Rng& rng) {
    spec.validate();
    Model model;
    model.spec = spec;
    for (std::size_t i = 0; i + 1 < spec.encoder_widths.size(); ++i) {
        model.layers.push_back(make_layer(spec.encoder_widths[i], spec.encoder_widths[i + 1],
                                          true, spec.batchnorm, true, rng));
    }
    model.encoder_layers = model.layers.size();
    Index in = spec.representation_dim();
    for (std::size_t i = 0; i < spec.projector_widths.size(); ++i) {
        const bool last = i + 1 == spec.projector_widths.size();
        model.layers.push_back(make_layer(in, spec.projector_widths[i], !last,
                                          spec.batchnorm && !last, !last, rng));
        in = spec.projector_widths[i];
    }
    return model;
}

ForwardCache forward_train(Model& model, const Matrix& batch) {
    if (batch.rows() != model.spec.input_dim()) {
        throw ShapeMismatch("batch rows do not match model input dimension");
    }
    const double n = static_cast<double>(batch.cols());
    ForwardCache cache;
    cache.layers.resize(model.layers.size());
    Matrix x = batch;
    for (std::size_t li = 0; li < model.layers.size(); ++li) {
        Layer& layer = model.layers[li];
        LayerCache& lc = cache.layers[li];
        lc.input = x;
        Matrix z = layer.W * x;
        if (layer.has_bias) z.colwise() += layer.b;
        if (layer.has_bn) {
            const Vector mean = z.rowwise().mean();
            Matrix centered = z.colwise() - mean;
            const Vector var = centered.rowwise().squaredNorm() / n;  // population variance
            lc.batch_var = var;
            lc.xhat = centered.array().colwise() / (var.array() + kBnEps).sqrt();
            z = (lc.xhat.array().colwise() * layer.bn.gamma.array()).matrix();
            z.colwise() += layer.bn.beta;
            // Running averages track the unbiased batch variance.
            const double unbias = n > 1.0 ? n / (n - 1.0) : 1.0;
            layer.bn.running_mean = (1.0 - kBnMomentum) * layer.bn.running_mean +
                                    kBnMomentum * mean;
            layer.bn.running_var = (1.0 - kBnMomentum) * layer.bn.running_var +
                                   kBnMomentum * unbias * var;
        }
        if (layer.has_relu) {
            lc.pre_relu = z;
            z = z.cwiseMax(0.0);
        }
        x = std::move(z);
        if (li + 1 == model.encoder_layers) cache.representations = x;
    }
    cache.embeddings = std::move(x);
    return cache;
}

std::pair<Matrix, Matrix> forward_eval(const Model& model, const Matrix& batch) {
    if (batch.rows() != model.spec.input_dim()) {
        throw ShapeMismatch("batch rows do not match model input dimension");
    }
    Matrix x = batch;
    Matrix representations;
    for (std::size_t li = 0; li < model.layers.size(); ++li) {
        const Layer& layer = model.layers[li];
        Matrix z = layer.W * x;
        if (layer.has_bias) z.colwise() += layer.b;
        if (layer.has_bn) {
            Matrix centered = z.colwise() - layer.bn.running_mean;
            z = (centered.array().colwise() /
                 (layer.bn.running_var.array() + kBnEps).sqrt())
                    .matrix();
            z = (z.array().colwise() * layer.bn.gamma.array()).matrix();
            z.colwise() += layer.bn.beta;
        }
        if (layer.has_relu) z = z.cwiseMax(0.0);
        x = std::move(z);
        if (li + 1 == model.encoder_layers) representations = x;
    }
    return {std::move(representations), std::move(x)};
}

ModelGrads zero_grads(const Model& model) {
    ModelGrads grads;
    grads.layers.resize(model.layers.size());
    for (std::size_t li = 0; li < model.layers.size(); ++li) {
        const Layer& layer = model.layers[li];
        LayerGrads& g = grads.layers[li];
        g.dW = Matrix::Zero(layer.W.rows(), layer.W.cols());
        g.db = Vector::Zero(layer.b.size());
        if (layer.has_bn) {
            g.dgamma = Vector::Zero(layer.bn.gamma.size());
            g.dbeta = Vector::Zero(layer.bn.beta.size());
        }
    }
    return grads;
}

void backward(const Model& model, const ForwardCache& cache, const Matrix& d_embeddings,
              ModelGrads& grads) {
    Matrix dy = d_embeddings;
    for (std::size_t li = model.layers.size(); li-- > 0;) {
        const Layer& layer = model.layers[li];
        const LayerCache& lc = cache.layers[li];
        LayerGrads& g = grads.layers[li];

        if (layer.has_relu) {
            dy = (lc.pre_relu.array() > 0.0).select(dy, 0.0);
        }
        if (layer.has_bn) {
            g.dgamma += (dy.array() * lc.xhat.array()).rowwise().sum().matrix();
            g.dbeta += dy.rowwise().sum();
            const Matrix dxhat = (dy.array().colwise() * layer.bn.gamma.array()).matrix();
            const Vector mean_dxhat = dxhat.rowwise().mean();
            const Vector mean_dxhat_xhat =
                (dxhat.array() * lc.xhat.array()).rowwise().mean().matrix();
            Matrix dz = dxhat;
            dz.colwise() -= mean_dxhat;
            dz -= (lc.xhat.array().colwise() * mean_dxhat_xhat.array()).matrix();
            dy = (dz.array().colwise() / (lc.batch_var.array() + kBnEps).sqrt()).matrix();
        }
        g.dW += dy * lc.input.transpose();
        if (layer.has_bias) g.db += dy.rowwise().sum();
        if (li > 0) dy = layer.W.transpose() * dy;
    }
}

}  // namespace gramcov
