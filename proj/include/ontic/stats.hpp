#pragma once

// Hypothesis tests used to compare simulated frequencies with exact probabilities.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/binomial.hpp>

namespace ontic::stats {

/// (freq - p) sqrt(n) / sqrt(p (1 - p)). NaN for degenerate p in {0, 1}.
inline double z_score(double freq, double p, std::uint64_t n) {
    if (!(p > 0.0 && p < 1.0)) return std::numeric_limits<double>::quiet_NaN();
    return (freq - p) * std::sqrt(static_cast<double>(n)) / std::sqrt(p * (1.0 - p));
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Two-sided exact binomial test: 2 min(P[X <= k], P[X >= k]), capped at 1.
inline double binomial_two_sided_p(std::uint64_t successes, std::uint64_t trials, double p) {
    if (successes > trials) throw std::invalid_argument("successes exceed trials");
    const boost::math::binomial_distribution<double> dist(static_cast<double>(trials), p);
    const double k = static_cast<double>(successes);
    const double lower = boost::math::cdf(dist, k);
    const double upper = successes == 0 ? 1.0 : boost::math::cdf(boost::math::complement(dist, k - 1.0));
    return std::min(1.0, 2.0 * std::min(lower, upper));
}

/// Kolmogorov-Smirnov distance between the sample and the standard normal.
inline double ks_statistic_normal(std::span<const double> sample) {
    if (sample.empty()) throw std::invalid_argument("KS test needs a non-empty sample");
    std::vector<double> xs(sample.begin(), sample.end());
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = normal_cdf(xs[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

/// Asymptotic p-value of the KS statistic d for sample size n, with the
/// Stephens small-sample correction to the Kolmogorov series.
inline double ks_p_value(double d, std::size_t n) {
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    if (lambda < 0.2) return 1.0;
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += (j % 2 == 1 ? term : -term);
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace ontic::stats
