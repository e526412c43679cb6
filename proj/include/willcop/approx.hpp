#pragma once

#include <cmath>
#include <deque>
#include <vector>

#include "measure.hpp"

namespace willcop {

// Breadth-first enumeration of the positive rationals through the
// Stern-Brocot tree: 1, 1/2, 2, 1/3, 2/3, 3/2, 3, ... Deterministic, dense
// in (0, inf) in the limit.
inline std::vector<double> stern_brocot(int n) {
    std::vector<double> out;
    struct Frac {
        long long ln, ld, rn, rd;
    };
    std::deque<Frac> queue{{0, 1, 1, 0}};
    while (static_cast<int>(out.size()) < n) {
        Frac f = queue.front();
        queue.pop_front();
        long long mn = f.ln + f.rn, md = f.ld + f.rd;
        out.push_back(static_cast<double>(mn) / static_cast<double>(md));
        queue.push_back({f.ln, f.ld, mn, md});
        queue.push_back({mn, md, f.rn, f.rd});
    }
    return out;
}

enum class ApproxKind { discrete, abs, singular };

namespace detail {

// midpoint-quantile atomization on levels (j - 1/2)/N
inline WilliamsonMeasure quantile_atomization(const WilliamsonMeasure& m, int levels) {
    std::vector<Atom> atoms;
    for (int j = 1; j <= levels; ++j) {
        double q = m.quantile((static_cast<double>(j) - 0.5) / levels);
        if (!atoms.empty() && snap_eq(atoms.back().q, q))
            atoms.back().mass += 1.0 / levels;
        else
            atoms.push_back({q, 1.0 / levels});
    }
    return WilliamsonMeasure(m.dimension(), std::move(atoms), {}, {});
}

inline void add_uniform_piece(std::vector<DensityPiece>& pieces, double center, double width,
                              double mass) {
    double lo = std::max(0.0, center - 0.5 * width);
    double hi = lo + width;
    pieces.push_back({lo, hi, Poly::constant(mass / width)});
}

// refit overlapping pieces onto a common cut grid, summing coefficient
// vectors (densities are stored in the global coordinate), so the piece list
// stays pairwise disjoint
inline std::vector<DensityPiece> merge_pieces(std::vector<DensityPiece> pieces) {
    std::vector<double> cuts;
    for (const auto& p : pieces) {
        cuts.push_back(p.from);
        cuts.push_back(p.to);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double a, double b) { return std::abs(a - b) <= snap_tol(b) * 1e-3; }),
               cuts.end());
    std::vector<DensityPiece> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        std::vector<double> coeffs;
        for (const auto& p : pieces) {
            if (p.from > a + snap_tol(a) || p.to < b - snap_tol(b)) continue;
            if (coeffs.size() < p.density.c.size()) coeffs.resize(p.density.c.size(), 0.0);
            for (std::size_t j = 0; j < p.density.c.size(); ++j) coeffs[j] += p.density.c[j];
        }
        Poly density(coeffs);
        if (coeffs.empty() || density.integrate(a, b) <= 0.0) continue;
        if (!out.empty() && std::abs(out.back().to - a) <= snap_tol(a) &&
            out.back().density.c == coeffs)
            out.back().to = b;
        else
            out.push_back({a, b, std::move(density)});
    }
    return out;
}

}  // namespace detail

// Fully supported (to scale 8) approximants mixed in at weight 1/n.
inline WilliamsonMeasure full_support_base(int dimension, ApproxKind kind) {
    switch (kind) {
        case ApproxKind::discrete: {
            std::vector<double> qs = stern_brocot(64);
            std::vector<std::pair<double, double>> located;
            double total = 0.0, w = 1.0;
            for (double q : qs) {
                w *= 0.5;
                located.emplace_back(q, w);
                total += w;
            }
            std::sort(located.begin(), located.end());
            std::vector<Atom> atoms;
            for (auto& [q, mass] : located) atoms.push_back({q, mass / total});
            return WilliamsonMeasure(dimension, std::move(atoms), {}, {});
        }
        case ApproxKind::abs: {
            // piecewise-linear interpolation of exp(-t) on [0, 8], normalized
            const int cells = 32;
            std::vector<DensityPiece> pieces;
            double norm = 1.0 - std::exp(-8.0);
            for (int i = 0; i < cells; ++i) {
                double a = 8.0 * i / cells, b = 8.0 * (i + 1) / cells;
                double fa = std::exp(-a) / norm, fb = std::exp(-b) / norm;
                double slope = (fb - fa) / (b - a);
                pieces.push_back({a, b, Poly::linear(fa - slope * a, slope)});
            }
            double mass = 0.0;
            for (const auto& p : pieces) mass += p.mass();
            for (auto& p : pieces)
                for (auto& c : p.density.c) c /= mass;
            return WilliamsonMeasure(dimension, {}, std::move(pieces), {});
        }
        case ApproxKind::singular: {
            std::vector<SingularComponent> comps;
            for (int k = 0; k < 8; ++k) {
                SingularComponent s;
                s.weight = 1.0 / 8.0;
                s.lo = static_cast<double>(k);
                s.len = 1.0;
                comps.push_back(std::move(s));
            }
            return WilliamsonMeasure(dimension, {}, {}, std::move(comps));
        }
    }
    throw std::logic_error("full_support_base: unreachable");
}

// gamma_n: a purely-`kind` approximant of the target measure.
inline WilliamsonMeasure pure_approximant(const WilliamsonMeasure& m, ApproxKind kind, int n) {
    const int levels = 16 * n;
    switch (kind) {
        case ApproxKind::discrete:
            return detail::quantile_atomization(m, levels);
        case ApproxKind::abs: {
            double width = 1.0 / n;
            std::vector<DensityPiece> pieces = m.pieces();
            for (const auto& a : m.atoms()) detail::add_uniform_piece(pieces, a.q, width, a.mass);
            for (const auto& s : m.singular()) {
                // histogram smoothing of the oracle on `levels` carrier cells
                double prev = 0.0;
                for (int j = 1; j <= levels; ++j) {
                    double x = static_cast<double>(j) / levels;
                    double cur = s.cdf01(x);
                    double mass = s.weight * (cur - prev);
                    if (mass > 0.0)
                        pieces.push_back({s.lo + s.len * (j - 1.0) / levels,
                                          s.lo + s.len * static_cast<double>(j) / levels,
                                          Poly::constant(mass / (s.len / levels))});
                    prev = cur;
                }
            }
            return WilliamsonMeasure(m.dimension(), {}, detail::merge_pieces(std::move(pieces)),
                                     {});
        }
        case ApproxKind::singular: {
            double width = 1.0 / n;
            std::vector<SingularComponent> comps = m.singular();
            auto add_cantor = [&](double lo, double len, double weight) {
                SingularComponent s;
                s.weight = weight;
                s.lo = std::max(0.0, lo);
                s.len = len;
                comps.push_back(std::move(s));
            };
            for (const auto& a : m.atoms()) add_cantor(a.q - 0.5 * width, width, a.mass);
            for (const auto& p : m.pieces()) {
                // equal-width subcells at matching mass keep weak convergence
                for (int j = 0; j < levels; ++j) {
                    double a = p.from + (p.to - p.from) * j / levels;
                    double b = p.from + (p.to - p.from) * (j + 1.0) / levels;
                    double mass = p.density.integrate(a, b);
                    if (mass > 0.0) add_cantor(a, b - a, mass);
                }
            }
            std::sort(comps.begin(), comps.end(),
                      [](const SingularComponent& a, const SingularComponent& b) { return a.lo < b.lo; });
            return WilliamsonMeasure(m.dimension(), {}, {}, std::move(comps));
        }
    }
    throw std::logic_error("pure_approximant: unreachable");
}

// beta_n = (1 - 1/n) gamma_n + (1/n) beta, renormalized. Purely `kind`,
// full support to the base's scale, weakly convergent to the target.
inline WilliamsonMeasure approximation_sequence(const WilliamsonMeasure& target, ApproxKind kind,
                                                int n) {
    require(n >= 1, "approximation_sequence: n must be >= 1");
    WilliamsonMeasure gamma_n = pure_approximant(target, kind, n);
    WilliamsonMeasure beta = full_support_base(target.dimension(), kind);
    double w = 1.0 / n;
    std::vector<Atom> atoms;
    std::vector<DensityPiece> pieces;
    std::vector<SingularComponent> sing;
    auto append = [&](const WilliamsonMeasure& m, double scale) {
        for (auto a : m.atoms()) {
            a.mass *= scale;
            atoms.push_back(a);
        }
        for (auto p : m.pieces()) {
            for (auto& c : p.density.c) c *= scale;
            pieces.push_back(std::move(p));
        }
        for (auto s : m.singular()) {
            s.weight *= scale;
            sing.push_back(std::move(s));
        }
    };
    append(gamma_n, 1.0 - w);
    append(beta, w);
    // collapse coincident atoms and overlapping step pieces from the mixture
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.q < b.q; });
    std::vector<Atom> merged_atoms;
    for (const auto& a : atoms) {
        if (!merged_atoms.empty() && snap_eq(merged_atoms.back().q, a.q))
            merged_atoms.back().mass += a.mass;
        else
            merged_atoms.push_back(a);
    }
    if (!pieces.empty()) pieces = detail::merge_pieces(std::move(pieces));
    WilliamsonMeasure mixture(target.dimension(), std::move(merged_atoms), std::move(pieces),
                              std::move(sing));
    return normalize(mixture);
}

}  // namespace willcop
