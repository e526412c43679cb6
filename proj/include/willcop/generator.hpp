#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "base.hpp"
#include "measure.hpp"

namespace willcop {

struct MonotoneReport {
    bool pass = true;
    std::string first_violation;  // empty iff pass
};

// Archimedean generator psi = W_d(gamma) together with its pseudo-inverse.
// Immutable after construction; the atom level cache is filled once here.
class Generator {
  public:
    explicit Generator(WilliamsonMeasure measure) : measure_(std::move(measure)) {
        auto rep = measure_.support_gaps();
        support_left_ = rep.left_endpoint;
        support_right_ = rep.right_endpoint;
        strict_ = rep.zero_in_closure;
        phi0_ = strict_ ? kInf : 1.0 / support_left_;
        double defect = std::abs(psi(1.0) - 0.5);
        require(defect <= 1e-9 + measure_.singular_resolution_bound(),
                "generator: measure is not normalized (psi(1) != 1/2)");
        for (const auto& a : measure_.atoms()) atom_levels_.push_back(psi(1.0 / a.q));
    }

    int d() const { return measure_.dimension(); }
    const WilliamsonMeasure& measure() const { return measure_; }
    bool strict() const { return strict_; }
    double phi0() const { return phi0_; }
    double support_left() const { return support_left_; }
    double support_right() const { return support_right_; }
    double normalization_defect() const { return psi(1.0) - 0.5; }

    // level t = psi(1/q) of each atom, aligned with measure().atoms()
    const std::vector<double>& atom_levels() const { return atom_levels_; }

    double psi(double z) const {
        require(z >= 0.0, "psi: z must be >= 0");
        return williamson_psi(measure_, z);
    }

    // psi^{(k)}(z) = (-1)^k (d-1)!/(d-1-k)! ∫ t^k (1-tz)_+^{d-1-k} dγ(t), k <= d-2
    double psi_derivative(int k, double z) const {
        require(k >= 0 && k <= d() - 2, "psi_derivative: k must be in [0, d-2]");
        require(z >= 0.0, "psi_derivative: z must be >= 0");
        if (k == 0) return psi(z);
        if (std::isinf(z)) return 0.0;
        int p = d() - 1 - k;
        Poly integrand = monomial(k) * Poly::linear(1.0, -z).pow(p);
        double hi = z == 0.0 ? kInf : 1.0 / z;
        double v = measure_.integrate_against(integrand, Interval::left_open(0.0, hi)).value;
        double sign = (k % 2 == 0) ? 1.0 : -1.0;
        return sign * falling_factorial(d() - 1, k) * v;
    }

    // D^- psi^{(d-2)}(z) = (-1)^{d-1} (d-1)! ∫_{(0,1/z]} t^{d-1} dγ(t)
    double dminus_psi(double z) const { return one_sided_dm2(z, true); }
    // D^+ psi^{(d-2)}(z): same with the open endpoint, dropping an atom at 1/z
    double dplus_psi(double z) const { return one_sided_dm2(z, false); }

    // |D^- psi^{(m-2)}(w)| up to a constant factor: the raw integral
    // ∫_{(0,1/w]} t^{m-1} (1-tw)_+^{d-m} dγ(t) used by the m-marginal kernel
    // ratio (the sign and factorial cancel there). Non-increasing in w.
    double kernel_g(double w, int m, bool closed_endpoint = true) const {
        require(m >= 2 && m <= d(), "kernel_g: order out of range");
        if (std::isinf(w)) return 0.0;
        double hi = w == 0.0 ? kInf : 1.0 / w;
        Interval iv = Interval::left_open(0.0, hi);
        iv.hi_closed = closed_endpoint;
        if (m == d()) return measure_.integrate_against(monomial(d() - 1), iv).value;
        Poly integrand = monomial(m - 1) * Poly::linear(1.0, -w).pow(d() - m);
        return measure_.integrate_against(integrand, iv).value;
    }

    // phi(y) = inf{z : psi(z) = y}; bisection with atom-level snapping so that
    // phi(psi(1/q)) returns 1/q exactly.
    double phi(double y) const {
        require(y >= 0.0 && y <= 1.0, "phi: y must be in [0,1]");
        if (y >= 1.0) return 0.0;
        if (y <= 0.0) return phi0_;
        const auto& atoms = measure_.atoms();
        for (std::size_t j = 0; j < atoms.size(); ++j)
            if (std::abs(atom_levels_[j] - y) <= 1e-12 && atom_levels_[j] > 0.0)
                return 1.0 / atoms[j].q;
        double lo = 0.0, hi;
        if (!strict_) {
            hi = phi0_;
        } else {
            hi = 1.0;
            while (psi(hi) > y && hi < std::ldexp(1.0, 60)) hi *= 2.0;
        }
        for (int it = 0; it < 80; ++it) {
            double mid = 0.5 * (lo + hi);
            if (psi(mid) > y)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }

    // phi'(y) = 1/psi'(phi(y)); for d = 2 the D^- branch is used at kinks
    double phi_prime(double y) const {
        require(y > 0.0 && y < 1.0, "phi_prime: y must be in (0,1)");
        double z = phi(y);
        double dpsi = d() >= 3 ? psi_derivative(1, z) : dminus_psi(z);
        return 1.0 / dpsi;
    }

    // d-monotonicity report on a grid, optionally at a different requested
    // order (then orders beyond the closed forms are probed with divided
    // differences of psi on the grid).
    MonotoneReport check_d_monotone(const std::vector<double>& grid, int d_request = 0) const {
        MonotoneReport rep;
        if (d_request == 0) d_request = d();
        require(!grid.empty(), "check_d_monotone: grid must be non-empty");
        const double tol = 1e-9;
        auto fail = [&](const std::string& what) {
            if (rep.pass) {
                rep.pass = false;
                rep.first_violation = what;
            }
        };
        for (int k = 0; k <= d_request - 2 && rep.pass; ++k) {
            std::vector<double> vals = derivative_proxy(grid, k);
            double sign = (k % 2 == 0) ? 1.0 : -1.0;
            for (std::size_t i = 0; i < vals.size(); ++i)
                if (sign * vals[i] < -tol) {
                    fail("sign violation of (-1)^k psi^(k) at order " + std::to_string(k));
                    break;
                }
        }
        if (rep.pass) {
            std::vector<double> w = derivative_proxy(grid, d_request - 2);
            double sign = ((d_request - 2) % 2 == 0) ? 1.0 : -1.0;
            for (auto& v : w) v *= sign;
            std::vector<double> zs = proxy_abscissae(grid, d_request - 2);
            for (std::size_t i = 0; i + 1 < w.size() && rep.pass; ++i)
                if (w[i + 1] > w[i] + tol) fail("(-1)^{d-2} psi^(d-2) is not non-increasing");
            for (std::size_t i = 0; i + 2 < w.size() && rep.pass; ++i) {
                double lam = (zs[i + 1] - zs[i]) / (zs[i + 2] - zs[i]);
                double chord = w[i] + lam * (w[i + 2] - w[i]);
                if (w[i + 1] > chord + tol) fail("(-1)^{d-2} psi^(d-2) is not convex");
            }
        }
        return rep;
    }

  private:
    double one_sided_dm2(double z, bool closed) const {
        require(z > 0.0, "one-sided derivative: z must be > 0");
        if (std::isinf(z)) return 0.0;
        Interval iv = Interval::left_open(0.0, 1.0 / z);
        iv.hi_closed = closed;
        double v = measure_.integrate_against(monomial(d() - 1), iv).value;
        double sign = ((d() - 1) % 2 == 0) ? 1.0 : -1.0;
        return sign * factorial(d() - 1) * v;
    }

    // psi^{(k)} at grid points via closed form when available, else k-th
    // Newton divided differences of psi over consecutive windows
    std::vector<double> derivative_proxy(const std::vector<double>& grid, int k) const {
        std::vector<double> out;
        if (k <= d() - 2) {
            for (double z : grid) out.push_back(psi_derivative(k, z));
            return out;
        }
        std::vector<double> dd;
        for (double z : grid) dd.push_back(psi(z));
        for (int order = 1; order <= k; ++order) {
            if (dd.size() < 2) return {};
            std::vector<double> next(dd.size() - 1);
            for (std::size_t i = 0; i + 1 < dd.size(); ++i)
                next[i] = (dd[i + 1] - dd[i]) / (grid[i + order] - grid[i]);
            dd.swap(next);
        }
        for (auto& v : dd) v *= factorial(k);
        return dd;
    }

    std::vector<double> proxy_abscissae(const std::vector<double>& grid, int k) const {
        if (k <= d() - 2) return grid;
        std::vector<double> zs;
        for (std::size_t i = 0; i + static_cast<std::size_t>(k) < grid.size(); ++i)
            zs.push_back(0.5 * (grid[i] + grid[i + static_cast<std::size_t>(k)]));
        return zs;
    }

    WilliamsonMeasure measure_;
    double phi0_ = kInf;
    bool strict_ = true;
    double support_left_ = 0.0;
    double support_right_ = 0.0;
    std::vector<double> atom_levels_;
};

}  // namespace willcop
