#include "gramcov/normalize.hpp"

#include <cmath>

namespace gramcov {

void NormalizationStrategy::validate() const {
    if (embedding_norm_target && dimension_norm_target) {
        throw InvalidArgument("at most one of embedding/dimension norm targets may be set");
    }
    if (embedding_norm_target && *embedding_norm_target <= 0.0) {
        throw InvalidArgument("embedding norm target must be positive");
    }
    if (dimension_norm_target && *dimension_norm_target <= 0.0) {
        throw InvalidArgument("dimension norm target must be positive");
    }
}

Scheme scheme_from_string(const std::string& name) {
    if (name == "none") return Scheme::None;
    if (name == "classical") return Scheme::Classical;
    if (name == "centered-classical") return Scheme::CenteredClassical;
    if (name == "dim-standardize") return Scheme::DimStandardize;
    if (name == "vicreg-center") return Scheme::VicregCenter;
    throw InvalidArgument("unknown normalization scheme: " + name);
}

std::string scheme_to_string(Scheme s) {
    switch (s) {
        case Scheme::None: return "none";
        case Scheme::Classical: return "classical";
        case Scheme::CenteredClassical: return "centered-classical";
        case Scheme::DimStandardize: return "dim-standardize";
        case Scheme::VicregCenter: return "vicreg-center";
    }
    throw InvalidArgument("invalid scheme value");
}

NormalizationStrategy resolve_scheme(Scheme s, Index M, Index N) {
    NormalizationStrategy out;
    switch (s) {
        case Scheme::None:
            break;
        case Scheme::Classical:
            out.embedding_norm_target = 1.0;
            break;
        case Scheme::CenteredClassical:
            out.center_dimensions = true;
            out.embedding_norm_target = 1.0;
            break;
        case Scheme::DimStandardize:
            out.center_dimensions = true;
            out.dimension_norm_target = std::sqrt(static_cast<double>(N) / static_cast<double>(M));
            break;
        case Scheme::VicregCenter:
            out.center_dimensions = true;
            break;
    }
    return out;
}

Matrix center_dimensions(const Matrix& K) {
    validate_embedding(K);
    return K.colwise() - K.rowwise().mean();
}

Matrix l2_normalize_embeddings(const Matrix& K) {
    validate_embedding(K);
    Matrix out = K;
    for (Index i = 0; i < K.cols(); ++i) {
        const double norm = K.col(i).norm();
        if (norm <= kZeroNormEps) {
            throw ZeroNormColumn("column " + std::to_string(i) + " has near-zero norm");
        }
        out.col(i) /= norm;
    }
    return out;
}

namespace {

Matrix scale_rows_to(const Matrix& K, double target) {
    Matrix out = K;
    for (Index j = 0; j < K.rows(); ++j) {
        const double norm = K.row(j).norm();
        if (norm <= kZeroNormEps) {
            throw ZeroNormRow("row " + std::to_string(j) + " has near-zero norm");
        }
        out.row(j) *= target / norm;
    }
    return out;
}

Matrix scale_cols_to(const Matrix& K, double target) {
    Matrix out = K;
    for (Index i = 0; i < K.cols(); ++i) {
        const double norm = K.col(i).norm();
        if (norm <= kZeroNormEps) {
            throw ZeroNormColumn("column " + std::to_string(i) + " has near-zero norm");
        }
        out.col(i) *= target / norm;
    }
    return out;
}

}  // namespace

Matrix standardize_dimensions(const Matrix& K) {
    validate_embedding(K);
    const double target = std::sqrt(static_cast<double>(K.cols()) / static_cast<double>(K.rows()));
    return scale_rows_to(center_dimensions(K), target);
}

Matrix apply(const NormalizationStrategy& strategy, const Matrix& K) {
    strategy.validate();
    validate_embedding(K);
    Matrix out = strategy.center_dimensions ? center_dimensions(K) : K;
    if (strategy.embedding_norm_target) {
        out = scale_cols_to(out, *strategy.embedding_norm_target);
    } else if (strategy.dimension_norm_target) {
        out = scale_rows_to(out, *strategy.dimension_norm_target);
    }
    return out;
}

Matrix apply_vjp(const NormalizationStrategy& strategy, const Matrix& K, const Matrix& G) {
    strategy.validate();
    require_same_shape(K, G);
    const Matrix centered = strategy.center_dimensions ? center_dimensions(K) : K;

    Matrix grad;
    if (strategy.embedding_norm_target) {
        const double target = *strategy.embedding_norm_target;
        grad.resize(K.rows(), K.cols());
        for (Index i = 0; i < K.cols(); ++i) {
            const double norm = centered.col(i).norm();
            if (norm <= kZeroNormEps) {
                throw ZeroNormColumn("column " + std::to_string(i) + " has near-zero norm");
            }
            const Vector unit = centered.col(i) / norm;
            // d/dk [t * k/|k|] = (t/|k|) (I - u u^T)
            grad.col(i) = (target / norm) * (G.col(i) - unit.dot(G.col(i)) * unit);
        }
    } else if (strategy.dimension_norm_target) {
        const double target = *strategy.dimension_norm_target;
        grad.resize(K.rows(), K.cols());
        for (Index j = 0; j < K.rows(); ++j) {
            const double norm = centered.row(j).norm();
            if (norm <= kZeroNormEps) {
                throw ZeroNormRow("row " + std::to_string(j) + " has near-zero norm");
            }
            const Eigen::RowVectorXd unit = centered.row(j) / norm;
            grad.row(j) = (target / norm) * (G.row(j) - unit.dot(G.row(j)) * unit);
        }
    } else {
        grad = G;
    }

    if (strategy.center_dimensions) {
        grad = grad.colwise() - grad.rowwise().mean();
    }
    return grad;
}

}  // namespace gramcov
