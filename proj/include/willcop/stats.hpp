#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "base.hpp"

namespace willcop {

// Dvoretzky-Kiefer-Wolfowitz band half-width at confidence 1 - alpha
inline double dkw_epsilon(std::size_t n, double alpha) {
    return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

// asymptotic one-sample Kolmogorov-Smirnov critical value
inline double ks_critical(std::size_t n, double alpha) {
    return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

inline double ks_two_sample_critical(std::size_t n, std::size_t m, double alpha) {
    double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    return c * std::sqrt((static_cast<double>(n) + static_cast<double>(m)) /
                         (static_cast<double>(n) * static_cast<double>(m)));
}

// sup_t |F_hat(t) - F(t)| against a reference CDF that may carry jumps;
// evaluated at the sample points and at supplied jump candidates.
inline double ks_statistic(std::vector<double> values, const std::function<double(double)>& cdf,
                           const std::function<double(double)>& cdf_minus,
                           const std::vector<double>& jump_candidates = {}) {
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        double v = values[i];
        // skip to the last tied index for the upper step
        if (i + 1 < values.size() && values[i + 1] == v) continue;
        double fhat_hi = static_cast<double>(i + 1) / n;
        auto lo_it = std::lower_bound(values.begin(), values.end(), v);
        double fhat_lo = static_cast<double>(lo_it - values.begin()) / n;
        d = std::max(d, std::abs(fhat_hi - cdf(v)));
        d = std::max(d, std::abs(fhat_lo - cdf_minus(v)));
    }
    for (double t : jump_candidates) {
        auto hi_it = std::upper_bound(values.begin(), values.end(), t);
        auto lo_it = std::lower_bound(values.begin(), values.end(), t);
        double fhat_hi = static_cast<double>(hi_it - values.begin()) / n;
        double fhat_lo = static_cast<double>(lo_it - values.begin()) / n;
        d = std::max(d, std::abs(fhat_hi - cdf(t)));
        d = std::max(d, std::abs(fhat_lo - cdf_minus(t)));
    }
    return d;
}

// two-sample KS statistic over the pooled points (ties allowed)
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    while (i < a.size() && j < b.size()) {
        double t = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= t) ++i;
        while (j < b.size() && b[j] <= t) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
    double s = 0.0, sq = 0.0;
    for (double x : xs) {
        s += x;
        sq += x * x;
    }
    double n = static_cast<double>(xs.size());
    double mean = s / n;
    double var = std::max(0.0, sq / n - mean * mean);
    return {mean, std::sqrt(var / n)};
}

}  // namespace willcop
