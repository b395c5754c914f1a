#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace gramcov {

/// Regularized incomplete beta function I_x(a, b), the CDF of Beta(a, b),
/// evaluated by continued fraction to ~1e-13. a, b > 0 and x in [0, 1].
double beta_cdf(double x, double a, double b);

/// Two-sided Kolmogorov-Smirnov statistic of `samples` against a CDF given
/// as a callable. Samples are copied and sorted internally.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Asymptotic KS critical value c(alpha)/sqrt(n) for alpha = 0.01.
double ks_critical_001(std::size_t n);

}  // namespace gramcov
