#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "base.hpp"
#include "generator.hpp"
#include "quadrature.hpp"

namespace willcop {

struct LevelSetReport {
    double t = 0.0;
    double mass = 0.0;
    double atom_location = kInf;  // 1/phi(t)
    std::string form_used;        // "gamma-atom" or "derivative-jump"
    double gamma_form = 0.0;
    double jump_form = 0.0;
};

// C_psi viewed at dimension dim <= d. Marginals share the generator; the
// Williamson measure is the d-transform inverse, so gamma-side operations
// (level masses, Kendall gamma form, band masses) require dim == d while the
// kernel, cdf and densities work on any marginal through psi derivatives.
class ArchCopula {
  public:
    explicit ArchCopula(Generator gen) : gen_(std::move(gen)), dim_(gen_.d()) {}
    ArchCopula(Generator gen, int dim) : gen_(std::move(gen)), dim_(dim) {
        require(dim_ >= 2 && dim_ <= gen_.d(), "copula: dimension out of range");
    }

    const Generator& generator() const { return gen_; }
    int dim() const { return dim_; }
    bool native() const { return dim_ == gen_.d(); }

    double cdf(std::span<const double> x) const {
        require(static_cast<int>(x.size()) == dim_, "cdf: wrong point dimension");
        double s = 0.0;
        for (double xi : x) {
            require(xi >= 0.0 && xi <= 1.0, "cdf: point must lie in [0,1]^d");
            s += gen_.phi(xi);
        }
        return gen_.psi(s);
    }

    ArchCopula marginal(int m) const {
        require(m >= 2 && m < dim_, "marginal: m must be in [2, d-1]");
        return ArchCopula(gen_, m);
    }

    // Density of the copula at an interior point. For a marginal (dim < d)
    // this always exists; at full dimension it exists only when gamma is
    // purely absolutely continuous, otherwise nullopt is returned.
    std::optional<double> density(std::span<const double> x) const {
        require(static_cast<int>(x.size()) == dim_, "density: wrong point dimension");
        for (double xi : x)
            if (xi <= 0.0 || xi >= 1.0) return 0.0;
        double s = 0.0, prod = 1.0;
        for (double xi : x) {
            s += gen_.phi(xi);
            prod *= gen_.phi_prime(xi);
        }
        int d = gen_.d();
        if (dim_ < d) {
            double dpsi = dim_ <= d - 2 ? gen_.psi_derivative(dim_, s) : gen_.dminus_psi(s);
            return prod * dpsi;
        }
        auto split = gen_.measure().lebesgue_components();
        if (split.dis > 0.0 || split.sing > 0.0) return std::nullopt;
        if (s <= 0.0) return 0.0;
        double t = 1.0 / s;
        double k_gamma = 0.0;
        for (const auto& p : gen_.measure().pieces())
            if (t >= p.from && t < p.to) k_gamma = p.density(t);
        double sign = (d % 2 == 0) ? 1.0 : -1.0;
        double dpsi_d = sign * factorial(d - 1) * k_gamma / std::pow(s, d + 1);
        return prod * dpsi_d;
    }

    // f^t; for t = 0 the two-case definition bounding L_0, with psi(u<0) := 1.
    double level_function(double t, std::span<const double> x) const {
        require(static_cast<int>(x.size()) == dim_ - 1, "level_function: wrong conditioning dimension");
        require(t >= 0.0 && t <= 1.0, "level_function: t must be in [0,1]");
        double s = 0.0;
        for (double xi : x) s += gen_.phi(xi);
        if (t == 0.0) {
            if (in_l0(s)) return 1.0;
            double u = gen_.phi0() - s;  // = inf in the strict case
            return u < 0.0 ? 1.0 : gen_.psi(u);
        }
        double u = gen_.phi(t) - s;
        if (u < 0.0 && !snap_eq(u, 0.0)) return 1.0;  // x outside the upper t-cut
        return gen_.psi(std::max(u, 0.0));
    }

    // Markov kernel K_C(x, [0,y]); all three cases of the explicit formula.
    double kernel_cdf(std::span<const double> x, double y) const {
        require(static_cast<int>(x.size()) == dim_ - 1, "kernel_cdf: wrong conditioning dimension");
        require(y >= 0.0 && y <= 1.0, "kernel_cdf: y must be in [0,1]");
        double s = 0.0, minx = 1.0;
        for (double xi : x) {
            s += gen_.phi(xi);
            minx = std::min(minx, xi);
        }
        if (minx >= 1.0 || in_l0(s)) return 1.0;
        if (y < level_function(0.0, x)) return 0.0;
        double den = gen_.kernel_g(s, dim_);
        if (den <= 0.0) return 1.0;  // only reachable within snapping of L_0
        double num = gen_.kernel_g(s + gen_.phi(y), dim_);
        return std::min(1.0, std::max(0.0, num / den));
    }

    // mu_C(L_t) in both closed forms; they must agree.
    LevelSetReport level_mass(double t) const {
        require(native(), "level_mass: native-dimension copula required");
        require(t >= 0.0 && t <= 1.0, "level_mass: t must be in [0,1]");
        LevelSetReport rep;
        rep.t = t;
        int d = gen_.d();
        const auto& m = gen_.measure();
        if (t >= 1.0) {
            rep.atom_location = kInf;
            rep.form_used = "gamma-atom";
            return rep;
        }
        double z = gen_.phi(t);  // phi(0) = phi0
        rep.atom_location = 1.0 / z;
        if (std::isinf(z)) {  // t = 0, strict case: mu_C(L_0) = 0
            rep.form_used = "gamma-atom";
            return rep;
        }
        rep.gamma_form = m.atom_mass_at(1.0 / z);
        double jump = gen_.dminus_psi(z) - (t == 0.0 ? 0.0 : gen_.dplus_psi(z));
        double sign = ((d - 1) % 2 == 0) ? 1.0 : -1.0;
        rep.jump_form = sign * std::pow(z, d - 1) / factorial(d - 1) * jump;
        double slack = 1e-10 + 16.0 * m.singular_resolution_bound();
        if (std::abs(rep.gamma_form - rep.jump_form) > slack)
            throw std::logic_error("level_mass: gamma-atom and derivative-jump forms disagree");
        rep.mass = rep.gamma_form;
        rep.form_used = "gamma-atom";
        return rep;
    }

    // mu_C(L_[s1,s2]) = gamma([1/phi(s1), 1/phi(s2)])
    double band_mass(double s1, double s2) const {
        require(native(), "band_mass: native-dimension copula required");
        require(s1 <= s2, "band_mass: s1 <= s2 required");
        double z1 = gen_.phi(s1), z2 = gen_.phi(s2);
        double lo = s1 == 0.0 ? 0.0 : 1.0 / z1;
        double hi = 1.0 / z2;  // = inf for s2 = 1
        return gen_.measure().integrate_against(Poly::constant(1.0), Interval::closed(lo, hi)).value;
    }

    // (gamma form, derivative-sum long form) of the Kendall distribution function
    std::pair<double, double> kendall_forms(double t) const {
        require(native(), "kendall: native-dimension copula required");
        require(t >= 0.0 && t <= 1.0, "kendall: t must be in [0,1]");
        int d = gen_.d();
        double z = gen_.phi(t);
        double gamma_form, long_form;
        if (z == 0.0) {
            gamma_form = long_form = 1.0;  // t = 1
        } else if (std::isinf(z)) {
            gamma_form = long_form = 0.0;  // t = 0, strict
        } else {
            gamma_form = gen_.measure().cdf(1.0 / z);
            if (t == 0.0) {
                double sign = ((d - 1) % 2 == 0) ? 1.0 : -1.0;
                long_form = sign * std::pow(z, d - 1) / factorial(d - 1) * gen_.dminus_psi(z);
            } else {
                double sign = ((d - 1) % 2 == 0) ? 1.0 : -1.0;
                long_form = sign * std::pow(z, d - 1) / factorial(d - 1) * gen_.dminus_psi(z);
                double zk = 1.0, ksign = 1.0;
                for (int k = 0; k <= d - 2; ++k) {
                    long_form += gen_.psi_derivative(k, z) * ksign / factorial(k) * zk;
                    zk *= z;
                    ksign = -ksign;
                }
            }
        }
        return {gamma_form, long_form};
    }

    double kendall_cdf(double t) const {
        auto [g, l] = kendall_forms(t);
        double slack = 1e-9 + 16.0 * gen_.measure().singular_resolution_bound();
        if (std::abs(g - l) > slack)
            throw std::logic_error("kendall_cdf: gamma and derivative-sum forms disagree");
        return g;
    }

    // gamma([0,z]) recovered from the Kendall function: F_K(psi(1/z)) above
    // 1/phi(0), zero below.
    double measure_cdf_from_kendall(double z) const {
        require(native(), "measure_cdf_from_kendall: native-dimension copula required");
        require(z >= 0.0, "measure_cdf_from_kendall: z must be >= 0");
        double cutoff = gen_.strict() ? 0.0 : 1.0 / gen_.phi0();
        if (z < cutoff && !snap_eq(z, cutoff)) return 0.0;
        if (z == 0.0) return 0.0;
        return kendall_forms(gen_.psi(1.0 / z)).first;
    }

    // mu_C(box) by disintegration: the kernel section mass integrated against
    // the (dim-1)-marginal law. Boxes are taken half-open (lo, hi].
    QuadResult box_mass(const std::vector<Interval>& box, double tol = 1e-8) const {
        require(static_cast<int>(box.size()) == dim_, "box_mass: box dimension mismatch");
        for (const auto& iv : box)
            require(iv.lo >= 0.0 && iv.hi <= 1.0 && iv.lo <= iv.hi, "box_mass: invalid sub-box");
        std::vector<double> x(static_cast<std::size_t>(dim_) - 1, 0.0);
        QuadResult total;
        total = integrate_coord(box, x, 0, tol);
        return total;
    }

    // ∫ K_C(x,[0,y]) dmu_{C^{1:dim-1}}(x) for the disintegration identity
    QuadResult kernel_margin_integral(double y, double tol = 1e-7) const {
        std::vector<Interval> box(static_cast<std::size_t>(dim_), Interval::left_open(0.0, 1.0));
        box.back().hi = y;
        return box_mass(box, tol);
    }

  private:
    bool in_l0(double phi_sum) const {
        double p0 = gen_.phi0();
        if (std::isinf(p0)) return std::isinf(phi_sum);
        return phi_sum >= p0 || snap_eq(phi_sum, p0);
    }

    // marginal density of the first (dim-1) coordinates at x (interior);
    // for dim == 2 the first marginal is uniform.
    double conditioning_density(std::span<const double> x) const {
        if (dim_ == 2) return 1.0;
        double s = 0.0, prod = 1.0;
        for (double xi : x) {
            s += gen_.phi(xi);
            prod *= gen_.phi_prime(xi);
        }
        int m = dim_ - 1, d = gen_.d();
        double dpsi = m <= d - 2 ? gen_.psi_derivative(m, s) : gen_.dminus_psi(s);
        return prod * dpsi;
    }

    // recursive iterated quadrature over the conditioning coordinates
    QuadResult integrate_coord(const std::vector<Interval>& box, std::vector<double>& x,
                               int coord, double tol) const {
        const int last = dim_ - 2;
        auto section = [&](double xi) {
            x[static_cast<std::size_t>(coord)] = xi;
            if (coord < last) return integrate_coord(box, x, coord + 1, tol * 0.5).value;
            double hi = kernel_cdf(x, box.back().hi);
            double lo = box.back().lo > 0.0 ? kernel_cdf(x, box.back().lo) : 0.0;
            return (hi - lo) * conditioning_density(x);
        };
        std::vector<double> breaks;
        if (coord == last) breaks = kink_abscissae(box, x, coord);
        QuadResult r = integrate_adaptive(section, box[static_cast<std::size_t>(coord)].lo,
                                          box[static_cast<std::size_t>(coord)].hi, tol, breaks);
        return r;
    }

    // Solutions x_i of phi(x_i) = B - (other phi terms) for the known jump
    // levels B of D^-psi^{(k)}: atom reciprocals and phi(0).
    std::vector<double> kink_abscissae(const std::vector<Interval>& box,
                                       const std::vector<double>& x, int coord) const {
        std::vector<double> levels;
        for (const auto& a : gen_.measure().atoms()) levels.push_back(1.0 / a.q);
        if (!gen_.strict()) levels.push_back(gen_.phi0());
        double rest = 0.0;
        for (int i = 0; i < dim_ - 1; ++i)
            if (i != coord) rest += gen_.phi(x[static_cast<std::size_t>(i)]);
        std::vector<double> ys = {box.back().lo, box.back().hi, -1.0};  // -1 marks "no y term"
        std::vector<double> out;
        for (double level : levels) {
            for (double y : ys) {
                double u = level - rest;
                if (y >= 0.0) u -= gen_.phi(y);
                if (u <= 0.0 || std::isinf(u)) continue;
                double xi = gen_.psi(u);
                if (xi > 0.0 && xi < 1.0) out.push_back(xi);
            }
        }
        return out;
    }

    Generator gen_;
    int dim_;
};

}  // namespace willcop
