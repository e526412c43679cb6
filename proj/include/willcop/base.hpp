#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace willcop {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative tolerance used to decide whether a computed abscissa coincides
// with a structural breakpoint (atom location, support endpoint). Bisection
// refines arguments far below this, so snapping never moves a genuinely
// distinct point onto a breakpoint.
inline double snap_tol(double at) { return 1e-9 * std::max(1.0, std::abs(at)); }

inline bool snap_eq(double a, double b) { return std::abs(a - b) <= snap_tol(b); }

// Half-open-by-default interval on [0, inf). Endpooint openness only matters
// for atoms; continuous components are insensitive to it.
struct Interval {
    double lo = 0.0;
    double hi = kInf;
    bool lo_open = true;
    bool hi_closed = true;

    static Interval closed(double a, double b) { return {a, b, false, true}; }
    static Interval left_open(double a, double b) { return {a, b, true, true}; }
    static Interval open(double a, double b) { return {a, b, true, false}; }

    bool contains_atom(double q) const {
        bool above = snap_eq(q, lo) ? !lo_open : q > lo;
        bool below = snap_eq(q, hi) ? hi_closed : q < hi;
        return above && below;
    }
};

// Dense univariate polynomial, coefficients in increasing degree.
struct Poly {
    std::vector<double> c;

    Poly() = default;
    explicit Poly(std::vector<double> coeffs) : c(std::move(coeffs)) {}
    static Poly constant(double v) { return Poly({v}); }
    static Poly linear(double c0, double c1) { return Poly({c0, c1}); }

    int degree() const { return static_cast<int>(c.size()) - 1; }

    double operator()(double x) const {
        double v = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
        return v;
    }

    Poly operator*(const Poly& o) const {
        if (c.empty() || o.c.empty()) return Poly();
        Poly r;
        r.c.assign(c.size() + o.c.size() - 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
        return r;
    }

    Poly antiderivative() const {
        Poly r;
        r.c.assign(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) r.c[i + 1] = c[i] / static_cast<double>(i + 1);
        return r;
    }

    // integral over [a, b] via the exact antiderivative
    double integrate(double a, double b) const {
        Poly F = antiderivative();
        return F(b) - F(a);
    }

    Poly pow(int p) const {
        Poly r = constant(1.0);
        for (int i = 0; i < p; ++i) r = r * (*this);
        return r;
    }
};

// t^k as a Poly
inline Poly monomial(int k) {
    std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
    c.back() = 1.0;
    return Poly(std::move(c));
}

inline double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// (d-1)!/(d-1-k)! falling factorial used by the transform derivatives
inline double falling_factorial(int d_minus_1, int k) {
    double f = 1.0;
    for (int i = 0; i < k; ++i) f *= static_cast<double>(d_minus_1 - i);
    return f;
}

inline void require(bool cond, const std::string& what) {
    if (!cond) throw std::invalid_argument(what);
}

}  // namespace willcop
