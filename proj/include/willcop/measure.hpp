#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "base.hpp"
#include "cantor.hpp"

namespace willcop {

struct Atom {
    double q;     // location in (0, inf)
    double mass;  // > 0
};

// Polynomial Lebesgue density on [from, to), coefficients in the global
// coordinate t. Degree is capped at 6.
struct DensityPiece {
    double from = 0.0;
    double to = 0.0;
    Poly density;

    double mass() const { return density.integrate(from, to); }
};

// Atom-free singular part: a base CDF oracle on [0,1] pushed through the
// affine carrier map t = lo + len*x. The built-in family is the Cantor
// staircase at dyadic depth `depth`; a custom monotone oracle may be plugged
// in, in which case integration falls back to Riemann-Stieltjes sums.
struct SingularComponent {
    double weight = 0.0;
    double lo = 0.0;
    double len = 1.0;
    int depth = 24;
    std::function<double(double)> base_cdf;  // empty => builtin Cantor

    bool builtin_cantor() const { return !base_cdf; }
    double resolution() const { return std::ldexp(1.0, -depth); }

    double cdf01(double x) const {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return builtin_cantor() ? cantor_cdf(x, depth) : base_cdf(x);
    }
    // CDF of the component in global coordinates, scaled by weight
    double cdf(double z) const { return weight * cdf01((z - lo) / len); }
};

struct StieltjesResult {
    double value = 0.0;
    double error_bound = 0.0;  // from singular oracles only; exact parts are closed-form
};

// per-Lebesgue-component values of one Stieltjes integral; summing the three
// parts reproduces the full integral exactly
struct StieltjesParts {
    double abs = 0.0;
    double dis = 0.0;
    double sing = 0.0;
    double error_bound = 0.0;
    double total() const { return abs + dis + sing; }
};

struct SupportGapsReport {
    std::vector<std::pair<double, double>> gaps;      // maximal open zero-mass intervals
                                                      // between support components
    std::vector<std::pair<double, double>> segments;  // merged support components
    double left_endpoint = 0.0;
    double right_endpoint = 0.0;
    bool zero_in_closure = false;  // strictness precursor

    // widest zero-mass interval below the right endpoint, counting (0, left)
    double max_gap() const {
        double g = left_endpoint;
        for (const auto& [a, b] : gaps) g = std::max(g, b - a);
        return g;
    }
};

struct LebesgueSplit {
    double abs = 0.0;
    double dis = 0.0;
    double sing = 0.0;
};

class WilliamsonMeasure {
  public:
    WilliamsonMeasure() = default;
    WilliamsonMeasure(int dimension, std::vector<Atom> atoms, std::vector<DensityPiece> pieces,
                      std::vector<SingularComponent> singular)
        : d_(dimension),
          atoms_(std::move(atoms)),
          pieces_(std::move(pieces)),
          singular_(std::move(singular)) {
        std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.q < b.q; });
        std::sort(pieces_.begin(), pieces_.end(),
                  [](const DensityPiece& a, const DensityPiece& b) { return a.from < b.from; });
        validate();
    }

    int dimension() const { return d_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<DensityPiece>& pieces() const { return pieces_; }
    const std::vector<SingularComponent>& singular() const { return singular_; }

    double total_mass() const {
        double m = 0.0;
        for (const auto& a : atoms_) m += a.mass;
        for (const auto& p : pieces_) m += p.mass();
        for (const auto& s : singular_) m += s.weight;
        return m;
    }

    double singular_resolution_bound() const {
        double b = 0.0;
        for (const auto& s : singular_) b += s.weight * s.resolution();
        return b;
    }

    // F_gamma(z) = gamma([0, z]); right-continuous, atoms snapped onto z.
    double cdf(double z) const {
        if (z < 0.0) return 0.0;
        double v = 0.0;
        for (const auto& a : atoms_)
            if (a.q <= z || snap_eq(a.q, z)) v += a.mass;
        for (const auto& p : pieces_) {
            double b = std::min(p.to, z);
            if (b > p.from) v += p.density.integrate(p.from, b);
        }
        for (const auto& s : singular_) v += s.cdf(z);
        return v;
    }

    // left limit F_gamma(z-)
    double cdf_minus(double z) const { return cdf(z) - atom_mass_at(z); }

    double atom_mass_at(double z) const {
        for (const auto& a : atoms_)
            if (snap_eq(a.q, z)) return a.mass;
        return 0.0;
    }

    // ∫_I f(t) dγ(t) split by Lebesgue component: closed form over atoms and
    // polynomial pieces, moment recursion (Cantor) or Riemann-Stieltjes sums
    // (custom oracle) over singular components.
    StieltjesParts integrate_parts(const Poly& f, const Interval& iv) const {
        StieltjesParts r;
        for (const auto& a : atoms_)
            if (iv.contains_atom(a.q)) r.dis += f(a.q) * a.mass;
        for (const auto& p : pieces_) {
            double a = std::max(iv.lo, p.from);
            double b = std::min(iv.hi, p.to);
            if (b > a) r.abs += (f * p.density).integrate(a, b);
        }
        for (const auto& s : singular_) r.sing += integrate_singular(s, f, iv, r.error_bound);
        return r;
    }

    StieltjesResult integrate_against(const Poly& f, const Interval& iv) const {
        StieltjesParts p = integrate_parts(f, iv);
        return {p.total(), p.error_bound};
    }

    StieltjesResult stieltjes_monomial(int k, const Interval& iv) const {
        require(k >= 0 && k <= 2 * (d_ - 1), "stieltjes_monomial: k out of range");
        return integrate_against(monomial(k), iv);
    }

    LebesgueSplit lebesgue_components() const {
        LebesgueSplit s;
        for (const auto& a : atoms_) s.dis += a.mass;
        for (const auto& p : pieces_) s.abs += p.mass();
        for (const auto& c : singular_) s.sing += c.weight;
        return s;
    }

    SupportGapsReport support_gaps() const {
        SupportGapsReport rep;
        std::vector<std::pair<double, double>> segs;
        for (const auto& a : atoms_) segs.emplace_back(a.q, a.q);
        for (const auto& p : pieces_) segs.emplace_back(p.from, p.to);
        for (const auto& s : singular_) segs.emplace_back(s.lo, s.lo + s.len);
        if (segs.empty()) return rep;
        std::sort(segs.begin(), segs.end());
        std::vector<std::pair<double, double>> merged{segs.front()};
        for (std::size_t i = 1; i < segs.size(); ++i) {
            auto& last = merged.back();
            if (segs[i].first <= last.second + snap_tol(last.second))
                last.second = std::max(last.second, segs[i].second);
            else
                merged.push_back(segs[i]);
        }
        rep.left_endpoint = merged.front().first;
        rep.right_endpoint = merged.back().second;
        rep.zero_in_closure = rep.left_endpoint <= snap_tol(0.0);
        for (std::size_t i = 0; i + 1 < merged.size(); ++i)
            rep.gaps.emplace_back(merged[i].second, merged[i + 1].first);
        rep.segments = std::move(merged);
        return rep;
    }

    double support_left() const { return support_gaps().left_endpoint; }
    double support_right() const { return support_gaps().right_endpoint; }

    // generalized inverse of F_gamma; exact on atoms
    double quantile(double u) const {
        require(u > 0.0 && u <= 1.0, "quantile: u must be in (0,1]");
        for (const auto& a : atoms_) {
            double hi = cdf(a.q);
            if (u <= hi && u > hi - a.mass) return a.q;
        }
        double lo = 0.0, hi = support_right();
        if (cdf(hi) < u) return hi;  // u within rounding of 1
        for (int it = 0; it < 100; ++it) {
            double mid = 0.5 * (lo + hi);
            if (cdf(mid) >= u)
                hi = mid;
            else
                lo = mid;
        }
        return hi;
    }

    void validate() const {
        require(d_ >= 2, "measure: dimension must be >= 2");
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            require(atoms_[i].q > 0.0, "measure: atom locations must be > 0");
            require(atoms_[i].mass > 0.0, "measure: atom masses must be > 0");
            if (i > 0) require(atoms_[i - 1].q < atoms_[i].q, "measure: atom locations must be strictly increasing");
        }
        for (std::size_t i = 0; i < pieces_.size(); ++i) {
            const auto& p = pieces_[i];
            require(p.from >= 0.0 && p.to > p.from, "measure: density piece needs 0 <= from < to");
            require(p.density.degree() <= 6, "measure: density degree capped at 6");
            check_nonnegative(p);
            if (i > 0)
                require(pieces_[i - 1].to <= p.from + snap_tol(p.from),
                        "measure: density pieces must be pairwise disjoint");
        }
        for (const auto& s : singular_) {
            require(s.weight > 0.0, "measure: singular weight must be > 0");
            require(s.lo >= 0.0 && s.len > 0.0, "measure: singular carrier must lie in [0,inf)");
            require(s.depth >= 1 && s.depth <= 52, "measure: singular depth out of range");
            require(std::abs(s.cdf01(0.0)) <= s.resolution(), "measure: oracle CDF must start at 0");
            require(std::abs(s.cdf01(1.0) - 1.0) <= s.resolution(), "measure: oracle CDF must end at 1");
            check_atom_free(s);
        }
        double slack = 1e-12 + singular_resolution_bound();
        require(std::abs(total_mass() - 1.0) <= slack, "measure: total mass must be 1");
    }

  private:
    static void check_nonnegative(const DensityPiece& p) {
        const int n = 33;
        for (int i = 0; i <= n; ++i) {
            // Chebyshev nodes plus both endpoints
            double theta = M_PI * static_cast<double>(i) / n;
            double t = 0.5 * (p.from + p.to) + 0.5 * (p.to - p.from) * std::cos(theta);
            require(p.density(t) >= -1e-12, "measure: density must be nonnegative");
        }
    }

    static void check_atom_free(const SingularComponent& s) {
        // probe spacing at resolution scale; genuine atoms >> threshold show up,
        // a Hoelder-continuous staircase stays below it
        double delta = s.resolution();
        double threshold = std::sqrt(delta);
        double prev = s.cdf01(0.0);
        for (int i = 1; i <= 512; ++i) {
            double x = static_cast<double>(i) / 512.0;
            double jump = s.cdf01(x + delta) - s.cdf01(x - delta);
            require(jump <= threshold + 1e-12, "measure: singular oracle has an atom-scale jump");
            double cur = s.cdf01(x);
            require(cur >= prev - 1e-15, "measure: singular oracle must be non-decreasing");
            prev = cur;
        }
    }

    double integrate_singular(const SingularComponent& s, const Poly& f, const Interval& iv,
                              double& error_bound) const {
        double a = std::max(iv.lo, s.lo);
        double b = std::min(iv.hi, s.lo + s.len);
        if (b <= a) return 0.0;
        double xa = (a - s.lo) / s.len, xb = (b - s.lo) / s.len;
        if (s.builtin_cantor()) {
            auto hi = cantor_partial_moments(xb, f.degree(), s.depth, s.lo, s.len);
            auto lo = cantor_partial_moments(xa, f.degree(), s.depth, s.lo, s.len);
            double v = 0.0;
            for (std::size_t k = 0; k < f.c.size(); ++k) v += f.c[k] * (hi[k] - lo[k]);
            double fmax = 0.0;
            for (int i = 0; i <= 8; ++i)
                fmax = std::max(fmax, std::abs(f(a + (b - a) * i / 8.0)));
            error_bound += s.weight * s.resolution() * (1.0 + fmax);
            return s.weight * v;
        }
        // generic oracle: midpoint Riemann-Stieltjes sum on a dyadic refinement
        const int cells = 1 << 12;
        double v = 0.0, fmax = 0.0;
        double fprev = s.cdf01(xa);
        for (int i = 1; i <= cells; ++i) {
            double x = xa + (xb - xa) * i / cells;
            double fcur = s.cdf01(x);
            double tmid = s.lo + s.len * (x - 0.5 * (xb - xa) / cells);
            double fv = f(tmid);
            fmax = std::max(fmax, std::abs(fv));
            v += fv * (fcur - fprev);
            fprev = fcur;
        }
        error_bound += s.weight * ((xb - xa) / cells + s.resolution()) * (1.0 + fmax) * 4.0;
        return s.weight * v;
    }

    int d_ = 2;
    std::vector<Atom> atoms_;
    std::vector<DensityPiece> pieces_;
    std::vector<SingularComponent> singular_;
};

// Williamson d-transform of the measure: psi(z) = ∫ (1 - t z)_+^{d-1} dγ(t).
inline double williamson_psi(const WilliamsonMeasure& m, double z) {
    if (z == 0.0) return m.total_mass();
    if (std::isinf(z)) return 0.0;
    int p = m.dimension() - 1;
    Poly integrand = Poly::linear(1.0, -z).pow(p);
    return m.integrate_against(integrand, Interval::left_open(0.0, 1.0 / z)).value;
}

// Pushforward under t -> c*t; the Williamson transform rescales as psi(c z).
inline WilliamsonMeasure rescale(const WilliamsonMeasure& m, double c) {
    std::vector<Atom> atoms;
    for (const auto& a : m.atoms()) atoms.push_back({a.q * c, a.mass});
    std::vector<DensityPiece> pieces;
    for (const auto& p : m.pieces()) {
        Poly d = p.density;
        double scale = 1.0 / c;
        for (std::size_t j = 0; j < d.c.size(); ++j) {
            d.c[j] *= scale;
            scale /= c;
        }
        pieces.push_back({p.from * c, p.to * c, d});
    }
    std::vector<SingularComponent> sing;
    for (const auto& s : m.singular()) {
        SingularComponent t = s;
        t.lo *= c;
        t.len *= c;
        sing.push_back(std::move(t));
    }
    return WilliamsonMeasure(m.dimension(), std::move(atoms), std::move(pieces), std::move(sing));
}

// Rescales the measure so that psi(1) = 1/2, solving psi(c) = 1/2 by
// bisection in log2(c) over [-60, 60]. A measure already normalized to
// within the bisection floor is returned unchanged, making normalize
// exactly idempotent.
inline WilliamsonMeasure normalize(const WilliamsonMeasure& m) {
    require(std::abs(m.total_mass() - 1.0) <= 1e-9 + m.singular_resolution_bound(),
            "normalize: input must be a probability measure");
    if (std::abs(williamson_psi(m, 1.0) - 0.5) <= 1e-13) return m;
    double lo = -60.0, hi = 60.0;
    if (williamson_psi(m, std::ldexp(1.0, 60)) >= 0.5)
        throw std::runtime_error("normalize: psi stays above 1/2 over the searchable range");
    if (williamson_psi(m, std::ldexp(1.0, -60)) <= 0.5)
        throw std::runtime_error("normalize: psi already below 1/2 at the smallest searchable scale");
    for (int it = 0; it < 90; ++it) {
        double mid = 0.5 * (lo + hi);
        if (williamson_psi(m, std::exp2(mid)) > 0.5)
            lo = mid;
        else
            hi = mid;
    }
    return rescale(m, std::exp2(0.5 * (lo + hi)));
}

}  // namespace willcop
