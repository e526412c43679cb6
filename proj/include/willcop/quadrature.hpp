#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "base.hpp"

namespace willcop {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = true;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights (QUADPACK dqk15)
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {0.129484966168870, 0.279705391489277,
                                  0.381830050505119, 0.417959183673469};

template <class F>
inline void gk15(const F& f, double a, double b, double& kronrod, double& err) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(c);
    double resk = kWgk[7] * fc, resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        double fv1 = f(c - h * kXgk[j]);
        double fv2 = f(c + h * kXgk[j]);
        resk += kWgk[j] * (fv1 + fv2);
        if (j % 2 == 1) resg += kWg[j / 2] * (fv1 + fv2);
    }
    kronrod = resk * h;
    err = std::abs((resk - resg) * h);
}

template <class F>
inline void adapt(const F& f, double a, double b, double tol, int depth, QuadResult& out) {
    double v, e;
    gk15(f, a, b, v, e);
    if (e <= tol || depth >= 28 || (b - a) < 1e-14) {
        out.value += v;
        out.error_estimate += e;
        if (e > tol && depth >= 28) out.converged = false;
        return;
    }
    double m = 0.5 * (a + b);
    adapt(f, a, m, 0.5 * tol, depth + 1, out);
    adapt(f, m, b, 0.5 * tol, depth + 1, out);
}

}  // namespace detail

// Adaptive Gauss-Kronrod integration of f over [a,b], pre-split at the given
// breakpoints (kernel jump surfaces, density kinks).
template <class F>
inline QuadResult integrate_adaptive(const F& f, double a, double b, double abs_tol,
                                     std::vector<double> breakpoints = {}) {
    QuadResult out;
    if (b <= a) return out;
    breakpoints.push_back(a);
    breakpoints.push_back(b);
    std::sort(breakpoints.begin(), breakpoints.end());
    std::vector<double> cuts;
    for (double x : breakpoints)
        if (x >= a && x <= b && (cuts.empty() || x > cuts.back() + 1e-14)) cuts.push_back(x);
    if (cuts.size() < 2) cuts = {a, b};
    double tol_per = abs_tol / static_cast<double>(cuts.size() - 1);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        detail::adapt(f, cuts[i], cuts[i + 1], tol_per, 0, out);
    return out;
}

}  // namespace willcop
