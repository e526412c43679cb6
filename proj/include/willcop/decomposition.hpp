#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "copula.hpp"
#include "sampler.hpp"

namespace willcop {

// One evaluation of the H-triple (H^abs_x, H^dis_x, H^sing_x) at (x, y).
struct KernelSplitEval {
    bool degenerate = false;  // x in L_0^{1:d-1} or M(x) = 1
    double habs = 0.0;
    double hdis = 0.0;
    double hsing = 0.0;
    double total() const { return habs + hdis + hsing; }
};

struct KernelAtom {
    double y = 0.0;
    double mass = 0.0;
};

struct ComponentMasses {
    double abs = 0.0, dis = 0.0, sing = 0.0;
    double se_abs = 0.0, se_dis = 0.0, se_sing = 0.0;
    std::string method;  // "structural" or "mc"
    std::size_t n_used = 0;
    double singular_resolution = 0.0;
};

struct SupportReport {
    bool full_support = false;
    double l0_mass = 0.0;  // mass of the f^0 graph (zero in the strict case)
    std::vector<std::pair<double, double>> zero_bands;     // open level bands of zero mass
    std::vector<std::pair<double, double>> support_bands;  // closed level bands carrying mass
    double max_gap = 0.0;                                  // widest gamma support gap
};

namespace detail {

inline double phi_sum(const Generator& gen, std::span<const double> x) {
    double s = 0.0;
    for (double xi : x) s += gen.phi(xi);
    return s;
}

inline bool degenerate_conditioning(const Generator& gen, std::span<const double> x, double s) {
    double minx = 1.0;
    for (double xi : x) minx = std::min(minx, xi);
    if (minx >= 1.0) return true;
    double p0 = gen.phi0();
    if (std::isinf(p0)) return std::isinf(s);
    return s >= p0 || snap_eq(s, p0);
}

}  // namespace detail

// K_C(x,[0,y]) split by the Lebesgue components of gamma; the three parts sum
// to the kernel value exactly because they are the component-wise terms of
// one Stieltjes integral.
inline KernelSplitEval kernel_split(const ArchCopula& cop, std::span<const double> x, double y) {
    require(cop.native(), "kernel_split: native-dimension copula required");
    require(static_cast<int>(x.size()) == cop.dim() - 1, "kernel_split: wrong conditioning dimension");
    const Generator& gen = cop.generator();
    KernelSplitEval out;
    double s = detail::phi_sum(gen, x);
    if (detail::degenerate_conditioning(gen, x, s)) {
        out.degenerate = true;
        return out;
    }
    int d = gen.d();
    double den = gen.kernel_g(s, d);
    if (den <= 0.0) {
        out.degenerate = true;
        return out;
    }
    double w = s + gen.phi(y);
    Interval iv = Interval::left_open(0.0, std::isinf(w) ? 0.0 : 1.0 / w);
    StieltjesParts parts = gen.measure().integrate_parts(monomial(d - 1), iv);
    out.habs = parts.abs / den;
    out.hdis = parts.dis / den;
    out.hsing = parts.sing / den;
    return out;
}

// Point masses of the kernel section: one per gamma-atom z_j with
// 1/z_j > sum phi(x_i), located at y_j = psi(1/z_j - sum phi(x_i)) with mass
// alpha_j z_j^{d-1} / ∫_{I_1} t^{d-1} dγ.
inline std::vector<KernelAtom> kernel_atoms(const ArchCopula& cop, std::span<const double> x) {
    require(cop.native(), "kernel_atoms: native-dimension copula required");
    const Generator& gen = cop.generator();
    double s = detail::phi_sum(gen, x);
    require(!detail::degenerate_conditioning(gen, x, s), "kernel_atoms: degenerate conditioning point");
    int d = gen.d();
    double den = gen.kernel_g(s, d);
    std::vector<KernelAtom> out;
    for (const auto& a : gen.measure().atoms()) {
        double recip = 1.0 / a.q;
        if (recip > s && !snap_eq(recip, s)) {
            double y = gen.psi(recip - s);
            out.push_back({y, a.mass * std::pow(a.q, d - 1) / den});
        }
    }
    std::sort(out.begin(), out.end(), [](const KernelAtom& a, const KernelAtom& b) { return a.y < b.y; });
    return out;
}

// (mu^abs, mu^dis, mu^sing)(I^d). Purely typed measures short-circuit to the
// exact structural answer; mixtures are estimated by Monte-Carlo
// disintegration over x ~ C^{1:d-1}.
inline ComponentMasses component_masses(const ArchCopula& cop, std::size_t n, std::uint64_t seed) {
    require(cop.native(), "component_masses: native-dimension copula required");
    require(n >= 1, "component_masses: n must be >= 1");
    const Generator& gen = cop.generator();
    ComponentMasses out;
    out.singular_resolution = gen.measure().singular_resolution_bound();
    LebesgueSplit split = gen.measure().lebesgue_components();
    double tol = 1e-12 + out.singular_resolution;
    if (std::abs(split.abs - 1.0) <= tol || std::abs(split.dis - 1.0) <= tol ||
        std::abs(split.sing - 1.0) <= tol) {
        out.method = "structural";
        out.abs = std::abs(split.abs - 1.0) <= tol ? 1.0 : 0.0;
        out.dis = std::abs(split.dis - 1.0) <= tol ? 1.0 : 0.0;
        out.sing = std::abs(split.sing - 1.0) <= tol ? 1.0 : 0.0;
        return out;
    }
    out.method = "mc";
    int d = cop.dim();
    std::vector<double> xs;
    if (d == 2) {
        CounterRng rng(seed, 0x7E57ULL);
        xs.resize(n);
        for (auto& v : xs) v = rng.next_double();
    } else {
        SampleBatch b = sample_conditional(cop.marginal(d - 1), n, seed);
        xs = std::move(b.rows);
    }
    const std::size_t m = static_cast<std::size_t>(d) - 1;
    double sum_a = 0, sum_d = 0, sum_s = 0, sq_a = 0, sq_d = 0, sq_s = 0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::span<const double> x(xs.data() + i * m, m);
        KernelSplitEval ev = kernel_split(cop, x, 1.0);
        if (ev.degenerate) continue;
        ++used;
        sum_a += ev.habs;
        sq_a += ev.habs * ev.habs;
        sum_d += ev.hdis;
        sq_d += ev.hdis * ev.hdis;
        sum_s += ev.hsing;
        sq_s += ev.hsing * ev.hsing;
    }
    require(used > 1, "component_masses: all conditioning points degenerate");
    auto finish = [&](double sum, double sq, double& mean, double& se) {
        mean = sum / static_cast<double>(used);
        double var = std::max(0.0, sq / static_cast<double>(used) - mean * mean);
        se = std::sqrt(var / static_cast<double>(used));
    };
    finish(sum_a, sq_a, out.abs, out.se_abs);
    finish(sum_d, sq_d, out.dis, out.se_dis);
    finish(sum_s, sq_s, out.sing, out.se_sing);
    out.n_used = used;
    return out;
}

// Maps gamma support gaps to zero-mass level bands (psi(1/a), psi(1/b)) and
// support segments to the bands [psi(1/a), psi(1/b)] carrying the mass of C.
inline SupportReport support_report(const ArchCopula& cop) {
    require(cop.native(), "support_report: native-dimension copula required");
    const Generator& gen = cop.generator();
    SupportReport rep;
    SupportGapsReport gaps = gen.measure().support_gaps();
    rep.full_support = gen.strict() && gaps.gaps.empty();
    rep.max_gap = gaps.max_gap();
    rep.l0_mass = gen.strict() ? 0.0 : gen.measure().atom_mass_at(gaps.left_endpoint);
    for (const auto& [a, b] : gaps.gaps)
        rep.zero_bands.emplace_back(gen.psi(1.0 / a), gen.psi(1.0 / b));
    // levels above the top of the support are another zero band
    rep.zero_bands.emplace_back(gen.psi(1.0 / gaps.right_endpoint), 1.0);
    for (const auto& [a, b] : gaps.segments)
        rep.support_bands.emplace_back(gen.psi(1.0 / a), gen.psi(1.0 / b));
    return rep;
}

}  // namespace willcop
