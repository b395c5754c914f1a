#include "gramcov/special.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "gramcov/errors.hpp"

namespace gramcov {

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_cont_frac(double x, double a, double b) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double result = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        result *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        result *= del;
        if (std::abs(del - 1.0) < kEps) return result;
    }
    throw Error("incomplete beta continued fraction did not converge");
}

}  // namespace

double beta_cdf(double x, double a, double b) {
    if (a <= 0.0 || b <= 0.0) throw InvalidArgument("beta_cdf requires a, b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    // The continued fraction converges fastest for x below the mean.
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cont_frac(x, a, b) / a;
    }
    return 1.0 - front * beta_cont_frac(1.0 - x, b, a) / b;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw InvalidArgument("ks_statistic requires samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        const double upper = (static_cast<double>(i) + 1.0) / n - f;
        const double lower = f - static_cast<double>(i) / n;
        d = std::max({d, upper, lower});
    }
    return d;
}

double ks_critical_001(std::size_t n) {
    return 1.628 / std::sqrt(static_cast<double>(n));
}

}  // namespace gramcov
