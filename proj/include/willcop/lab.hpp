#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "approx.hpp"
#include "copula.hpp"

namespace willcop {

enum class Side { left, right };

struct NonDiffPoint {
    double t = 0.0;    // level whose graph carries the kink
    double y = 0.0;    // ordinate f^t(x)
    double gap = 0.0;  // analytic one-sided derivative gap
};

struct FdEstimate {
    double estimate = 0.0;
    double noise_floor = 0.0;  // spread of the last two quotients
    bool converged = true;
    std::vector<double> quotients;
};

struct NonDiffCertificate {
    std::vector<double> x;
    double y = 0.0;
    double t = 0.0;
    double left = 0.0;
    double right = 0.0;
    double gap = 0.0;
    FdEstimate fd_left, fd_right;
    bool verdict = false;
};

// ∂_2...∂_{d-1} C(x, y) = Π_{j=2}^{d-1} phi'(x_j) · psi^{(d-2)}(Σ phi(x_i) + phi(y)).
// For d = 2 the product is empty and this is C itself.
inline double mixed_partial_dm2(const ArchCopula& cop, std::span<const double> x, double y) {
    require(static_cast<int>(x.size()) == cop.dim() - 1, "mixed_partial_dm2: wrong point dimension");
    const Generator& gen = cop.generator();
    double s = gen.phi(y), prod = 1.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        s += gen.phi(x[j]);
        if (j >= 1) prod *= gen.phi_prime(x[j]);
    }
    int k = cop.dim() - 2;
    double dpsi = k == 0 ? gen.psi(s) : gen.psi_derivative(k, s);
    return prod * dpsi;
}

// One-sided (d-1)-st order mixed partials: the right x_1-derivative picks up
// D^- psi^{(d-2)} at the composite argument, the left one D^+.
inline double one_sided_dm1(const ArchCopula& cop, std::span<const double> x, double y, Side side) {
    require(static_cast<int>(x.size()) == cop.dim() - 1, "one_sided_dm1: wrong point dimension");
    const Generator& gen = cop.generator();
    require(cop.native(), "one_sided_dm1: native-dimension copula required");
    double s = gen.phi(y), prod = 1.0;
    for (double xi : x) {
        s += gen.phi(xi);
        prod *= gen.phi_prime(xi);
    }
    double d = side == Side::right ? gen.dminus_psi(s) : gen.dplus_psi(s);
    return prod * d;
}

// All kink ordinates above x: one per gamma-atom q with x in the upper
// psi(1/q)-cut. The analytic gap is (d-1)!  alpha_q q^{d-1} Π |phi'(x_i)|.
inline std::vector<NonDiffPoint> nondiff_points(const ArchCopula& cop, std::span<const double> x) {
    require(cop.native(), "nondiff_points: native-dimension copula required");
    const Generator& gen = cop.generator();
    int d = gen.d();
    double s = 0.0, prod = 1.0;
    for (double xi : x) {
        s += gen.phi(xi);
        prod *= std::abs(gen.phi_prime(xi));
    }
    std::vector<NonDiffPoint> out;
    const auto& atoms = gen.measure().atoms();
    for (std::size_t j = 0; j < atoms.size(); ++j) {
        double recip = 1.0 / atoms[j].q;
        if (recip > s && !snap_eq(recip, s)) {
            NonDiffPoint p;
            p.t = gen.atom_levels()[j];
            p.y = gen.psi(recip - s);
            p.gap = factorial(d - 1) * atoms[j].mass * std::pow(atoms[j].q, d - 1) * prod;
            out.push_back(p);
        }
    }
    std::sort(out.begin(), out.end(), [](const NonDiffPoint& a, const NonDiffPoint& b) { return a.y < b.y; });
    return out;
}

// Purely atomic Williamson measure on the first N points of the dense
// rational enumeration (or explicit locations/raw masses), geometric masses
// 2^-i renormalized, then normalized into the Williamson class.
inline WilliamsonMeasure dense_pathology_measure(int dimension, int truncation,
                                                 std::vector<double> locations = {},
                                                 std::vector<double> raw_masses = {}) {
    require(truncation >= 1, "dense_pathology_measure: truncation must be >= 1");
    if (locations.empty()) locations = stern_brocot(truncation);
    require(static_cast<int>(locations.size()) == truncation,
            "dense_pathology_measure: wrong number of locations");
    if (raw_masses.empty()) {
        double w = 1.0;
        for (int i = 0; i < truncation; ++i) {
            w *= 0.5;
            raw_masses.push_back(w);
        }
    }
    require(raw_masses.size() == locations.size(), "dense_pathology_measure: masses/locations mismatch");
    double total = 0.0;
    for (double m : raw_masses) total += m;
    std::vector<std::pair<double, double>> located;
    for (int i = 0; i < truncation; ++i) located.emplace_back(locations[i], raw_masses[i] / total);
    std::sort(located.begin(), located.end());
    std::vector<Atom> atoms;
    for (auto& [q, mass] : located) {
        if (!atoms.empty() && snap_eq(atoms.back().q, q))
            atoms.back().mass += mass;
        else
            atoms.push_back({q, mass});
    }
    return normalize(WilliamsonMeasure(dimension, std::move(atoms), {}, {}));
}

// One-sided difference quotients of mixed_partial_dm2 in the first
// coordinate across a decreasing step schedule.
inline FdEstimate fd_probe(const ArchCopula& cop, std::span<const double> x, double y, Side side,
                           const std::vector<double>& steps) {
    require(steps.size() >= 4, "fd_probe: step schedule must have length >= 4");
    for (std::size_t i = 0; i < steps.size(); ++i) {
        require(steps[i] > 0.0 && steps[i] <= 1e-2, "fd_probe: steps must lie in (0, 1e-2]");
        if (i > 0) require(steps[i] < steps[i - 1], "fd_probe: steps must decrease");
    }
    std::vector<double> pt(x.begin(), x.end());
    double base = mixed_partial_dm2(cop, pt, y);
    FdEstimate est;
    for (double h : steps) {
        double x1 = side == Side::right ? x[0] + h : x[0] - h;
        pt[0] = x1;
        double shifted = mixed_partial_dm2(cop, pt, y);
        double q = side == Side::right ? (shifted - base) / h : (base - shifted) / h;
        est.quotients.push_back(q);
    }
    pt[0] = x[0];
    std::size_t k = est.quotients.size();
    est.estimate = est.quotients[k - 1];
    est.noise_floor = std::abs(est.quotients[k - 1] - est.quotients[k - 2]);
    double first_spread = std::abs(est.quotients[1] - est.quotients[0]);
    est.converged = est.noise_floor <= 10.0 * first_spread + 1e-300;
    return est;
}

inline const std::vector<double>& default_fd_steps() {
    static const std::vector<double> steps{1e-3, 4e-4, 1.6e-4, 6.4e-5, 2.56e-5};
    return steps;
}

// Analytic one-sided values plus FD certification at (x, y). The verdict
// demands the analytic gap clear the FD noise floor by 10x and both FD
// estimates to track their analytic sides (5% relative, with the noise floor
// as the absolute floor near zero).
inline NonDiffCertificate certify_nondiff(const ArchCopula& cop, std::span<const double> x, double y,
                                          double t = std::nan("")) {
    NonDiffCertificate cert;
    cert.x.assign(x.begin(), x.end());
    cert.y = y;
    cert.t = t;
    cert.left = one_sided_dm1(cop, x, y, Side::left);
    cert.right = one_sided_dm1(cop, x, y, Side::right);
    cert.gap = cert.right - cert.left;
    cert.fd_left = fd_probe(cop, x, y, Side::left, default_fd_steps());
    cert.fd_right = fd_probe(cop, x, y, Side::right, default_fd_steps());
    double scale = std::max(std::abs(cert.left), std::abs(cert.right));
    double nf = std::max(cert.fd_left.noise_floor, cert.fd_right.noise_floor);
    auto tracks = [&](double analytic, const FdEstimate& fd) {
        double tol = std::max({0.05 * std::abs(analytic), 5.0 * fd.noise_floor, 1e-9 * scale});
        return std::abs(fd.estimate - analytic) <= tol;
    };
    cert.verdict = std::abs(cert.gap) > 10.0 * nf && tracks(cert.left, cert.fd_left) &&
                   tracks(cert.right, cert.fd_right);
    return cert;
}

}  // namespace willcop
