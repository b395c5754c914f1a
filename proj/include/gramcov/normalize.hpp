#pragma once

#include <optional>
#include <string>

#include "gramcov/matrix.hpp"

namespace gramcov {

/// Declarative description of the centering/scaling applied to an embedding
/// matrix before a loss. At most one of the two norm targets may be set.
struct NormalizationStrategy {
    bool center_dimensions = false;
    std::optional<double> embedding_norm_target;  // per-column L2 norm
    std::optional<double> dimension_norm_target;  // per-row L2 norm

    void validate() const;
};

/// Named schemes exposed in configs. Classical is plain per-embedding L2
/// normalization; A adds dimension centering; B replaces the embedding norm
/// with per-dimension standardization to norm sqrt(N/M).
enum class Scheme {
    None,
    Classical,
    CenteredClassical,
    DimStandardize,
    VicregCenter,
};

Scheme scheme_from_string(const std::string& name);
std::string scheme_to_string(Scheme s);

/// Resolve a named scheme into a concrete strategy for an M x N matrix.
NormalizationStrategy resolve_scheme(Scheme s, Index M, Index N);

/// Subtracts the mean of every row (dimension); shape preserved.
Matrix center_dimensions(const Matrix& K);

/// Scales every column to unit L2 norm. Throws ZeroNormColumn below eps.
Matrix l2_normalize_embeddings(const Matrix& K);

/// Centers each row, normalizes it, and scales by sqrt(N/M); all row norms
/// equal sqrt(N/M) afterwards. Throws ZeroNormRow on a constant row.
Matrix standardize_dimensions(const Matrix& K);

/// Applies a strategy: centering first, then the single norm transform.
Matrix apply(const NormalizationStrategy& strategy, const Matrix& K);

/// Vector-Jacobian product of `apply` at K for an upstream gradient G
/// (same shape as K). Used when composing loss-through-normalization.
Matrix apply_vjp(const NormalizationStrategy& strategy, const Matrix& K, const Matrix& G);

inline constexpr double kZeroNormEps = 1e-12;

}  // namespace gramcov
