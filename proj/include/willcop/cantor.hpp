#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "base.hpp"

namespace willcop {

namespace detail {

inline constexpr int kMaxMomentOrder = 24;

inline const std::array<std::array<double, kMaxMomentOrder + 1>, kMaxMomentOrder + 1>&
binomials() {
    static const auto table = [] {
        std::array<std::array<double, kMaxMomentOrder + 1>, kMaxMomentOrder + 1> b{};
        for (int n = 0; n <= kMaxMomentOrder; ++n) {
            b[n][0] = 1.0;
            for (int k = 1; k <= n; ++k)
                b[n][k] = b[n - 1][k - 1] + (k <= n - 1 ? b[n - 1][k] : 0.0);
        }
        return b;
    }();
    return table;
}

// Full moments M_k = ∫ τ^k dμ_C over [0,1] of the standard Cantor measure,
// from the self-similarity μ_C = ½ μ_C(3·) + ½ μ_C(3·-2):
//   M_k (2·3^k - 2) = Σ_{j<k} C(k,j) 2^{k-j} M_j.
inline const std::array<double, kMaxMomentOrder + 1>& cantor_full_moments() {
    static const auto table = [] {
        std::array<double, kMaxMomentOrder + 1> m{};
        m[0] = 1.0;
        const auto& b = binomials();
        for (int k = 1; k <= kMaxMomentOrder; ++k) {
            double s = 0.0;
            for (int j = 0; j < k; ++j) s += b[k][j] * std::pow(2.0, k - j) * m[j];
            m[k] = s / (2.0 * std::pow(3.0, k) - 2.0);
        }
        return m;
    }();
    return table;
}

}  // namespace detail

// Cantor staircase on [0,1] truncated at `depth` ternary digits.
// |returned - exact| <= 2^-depth.
inline double cantor_cdf(double x, int depth) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double v = 0.0, w = 1.0;
    for (int level = 0; level < depth; ++level) {
        if (x < 1.0 / 3.0) {
            w *= 0.5;
            x *= 3.0;
        } else if (x < 2.0 / 3.0) {
            return v + 0.5 * w;
        } else {
            v += 0.5 * w;
            w *= 0.5;
            x = 3.0 * x - 2.0;
        }
        if (x <= 0.0) return v;
        if (x >= 1.0) return v + w;
    }
    return v + w * std::min(std::max(x, 0.0), 1.0);
}

// Partial moments P_k(x) = ∫_{[0,x]} (u + s·τ)^k dμ_C(τ), k = 0..order,
// for the Cantor measure pushed through the affine carrier map τ ↦ u + s·τ.
// Exact up to the 2^-depth truncation of the final branch.
inline std::vector<double> cantor_partial_moments(double x, int order, int depth,
                                                  double u = 0.0, double s = 1.0) {
    const auto& b = detail::binomials();
    const auto& M = detail::cantor_full_moments();
    std::vector<double> acc(static_cast<std::size_t>(order) + 1, 0.0);

    // moments of the branch [u0, u0+s0] with weight w0
    auto add_branch = [&](double w0, double u0, double s0) {
        for (int k = 0; k <= order; ++k) {
            double mk = 0.0, up = 1.0;
            // Σ_j C(k,j) u0^{k-j} s0^j M_j, accumulated from j=k down via powers of u0
            for (int j = k; j >= 0; --j) {
                mk += b[k][j] * up * std::pow(s0, j) * M[j];
                up *= u0;
            }
            acc[static_cast<std::size_t>(k)] += w0 * mk;
        }
    };

    if (x <= 0.0) return acc;
    double w = 1.0;
    for (int level = 0; level < depth; ++level) {
        if (x >= 1.0) {
            add_branch(w, u, s);
            return acc;
        }
        if (x < 1.0 / 3.0) {
            s /= 3.0;
            w *= 0.5;
            x *= 3.0;
        } else if (x < 2.0 / 3.0) {
            add_branch(0.5 * w, u, s / 3.0);
            return acc;
        } else {
            add_branch(0.5 * w, u, s / 3.0);
            u += 2.0 * s / 3.0;
            s /= 3.0;
            w *= 0.5;
            x = 3.0 * x - 2.0;
        }
        if (x <= 0.0) return acc;
    }
    // depth exhausted: pro-rate the remaining branch
    double frac = std::min(std::max(x, 0.0), 1.0);
    add_branch(w * frac, u, s);
    return acc;
}

}  // namespace willcop
