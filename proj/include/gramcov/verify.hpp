#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gramcov/matrix.hpp"
#include "gramcov/sphere.hpp"

namespace gramcov {

/// Structured pass/fail record for one algebraic or distributional check.
struct VerificationReport {
    std::string check;
    Index rows = 0;
    Index cols = 0;
    std::string generator;
    std::uint64_t seed = 0;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

enum class NormMode { ColumnsNormalized, RowsNormalized };

std::string norm_mode_to_string(NormMode mode);

/// Gram/covariance duality identity: l_nc + sum(row norms^4) equals
/// l_c + sum(col norms^4) for every finite matrix. Residual is relative to
/// max(1, rhs); passes at 1e-10.
VerificationReport verify_identity(const Matrix& K);

/// For a matrix whose rows and columns all have unit norm (within 1e-9,
/// which forces M = N), checks l_nc = l_c + N - M. Throws
/// NotDoublyNormalized when the precondition fails.
VerificationReport verify_doubly_normalized(const Matrix& K);

/// Norm-interplay bounds: with all column norms equal to a,
/// (N^2/M) a^4 <= sum(row norms^4) <= N^2 a^4, and the transposed analogue
/// for rows. Residual is the bound violation (zero when inside); `detail`
/// records lower/measured/upper. Throws NotNormalized.
VerificationReport verify_norm_bounds(const Matrix& K, NormMode mode);

/// Criterion bounds for unit-normalized matrices:
/// l_nc - N + N^2/M <= l_c <= l_nc - N + N^2 (columns mode), and the
/// row-mode analogue. Throws NotNormalized.
VerificationReport verify_corollary_bounds(const Matrix& K, NormMode mode);

struct NormInterplayRow {
    double lower = 0.0;
    double measured = 0.0;
    double upper = 0.0;
};

/// Bound columns alone, for a common norm a (no matrix required).
NormInterplayRow norm_interplay_bounds(Index M, Index N, NormMode mode, double a = 1.0);

/// Lower bound, measured sum of fourth-power norms, and upper bound for a
/// matrix normalized per `mode`. Throws NotNormalized.
NormInterplayRow norm_interplay_report(const Matrix& K, NormMode mode);

/// Distributional checks on uniform-sphere dot products: mean within 3
/// standard errors of 0, variance within 5 standard errors of 1/M, and the
/// KS distance of (x+1)/2 against Beta((M-1)/2, (M-1)/2) under the
/// alpha = 0.01 critical value. Uses n_pairs disjoint pairs.
std::vector<VerificationReport> verify_sphere_stats(Index M, Index n_pairs, std::uint64_t seed);

}  // namespace gramcov
