#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "copula.hpp"
#include "rng.hpp"

namespace willcop {

enum class SampleMethod { radial, conditional };

inline const char* to_string(SampleMethod m) {
    return m == SampleMethod::radial ? "radial" : "conditional";
}

struct SampleBatch {
    std::size_t n = 0;
    int d = 0;
    std::vector<double> rows;   // row-major n x d
    std::vector<double> cvals;  // C(row), tracked through the representation
    std::vector<double> radii;  // 1/(Σ phi(row)): the gamma-side coordinate of C(row)
    SampleMethod method = SampleMethod::radial;
    std::uint64_t seed = 0;

    double at(std::size_t i, int j) const { return rows[i * static_cast<std::size_t>(d) + j]; }
};

namespace detail {

// Inverts V = G_m(w)/G_m(s) over w >= s for the m-marginal kernel, where
// G_m(w) = ∫_{(0,1/w]} t^{m-1}(1-tw)^{d-m} dγ is non-increasing in w.
// Returns w* = sup{w : G_m(w) >= V G_m(s)}; the sampled ordinate is
// y = psi(w* - s) and the caller continues with the running sum w*.
// Jumps of G_m (kernel atoms, m = d only) resolve to exact atom reciprocals.
inline double invert_kernel_w(const Generator& gen, double s, int m, double v) {
    double den = gen.kernel_g(s, m);
    if (den <= 0.0) return s;  // degenerate conditioning point; kernel case 1
    double target = v * den;
    double lo = s, hi;
    if (!gen.strict()) {
        hi = gen.phi0() * (1.0 + 1e-6) + 1e-12;
    } else {
        hi = std::max(2.0 * std::max(s, 1.0), 1.0);
        while (gen.kernel_g(hi, m) >= target && hi < std::ldexp(1.0, 62)) hi *= 2.0;
    }
    if (gen.kernel_g(hi, m) >= target) return hi;
    for (int it = 0; it < 64; ++it) {
        double mid = 0.5 * (lo + hi);
        if (gen.kernel_g(mid, m) >= target)
            lo = mid;
        else
            hi = mid;
    }
    double w = lo;
    if (m == gen.d())
        for (const auto& a : gen.measure().atoms())
            if (snap_eq(w, 1.0 / a.q)) return 1.0 / a.q;
    return w;
}

}  // namespace detail

// Radial-simplex representation: T ~ gamma by quantile inversion, R = 1/T,
// S uniform on the simplex via normalized exponential spacings, U_i = psi(R S_i).
inline SampleBatch sample_radial(const ArchCopula& cop, std::size_t n, std::uint64_t seed) {
    require(cop.native(), "sample_radial: native-dimension copula required");
    require(n >= 1, "sample_radial: n must be >= 1");
    const Generator& gen = cop.generator();
    const int d = cop.dim();
    require(d <= 64, "sample_radial: dimension too large");
    SampleBatch batch{n, d, {}, {}, {}, SampleMethod::radial, seed};
    batch.rows.resize(n * static_cast<std::size_t>(d));
    batch.cvals.resize(n);
    batch.radii.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        CounterRng rng(seed, i);  // one substream per sample
        double t = gen.measure().quantile(rng.next_double());
        double r = 1.0 / t;  // r <= phi0 since t >= the left support endpoint
        double e[64], esum = 0.0;
        for (int j = 0; j < d; ++j) {
            e[j] = -std::log(rng.next_double());
            esum += e[j];
        }
        for (int j = 0; j < d; ++j) {
            double u = gen.psi(r * e[j] / esum);
            batch.rows[i * static_cast<std::size_t>(d) + j] = std::min(1.0, std::max(0.0, u));
        }
        batch.cvals[i] = gen.psi(r);  // C(U) = psi(Σ phi(U_j)) = psi(r)
        batch.radii[i] = t;
    }
    return batch;
}

// Conditional inverse sampling through the marginal Markov kernels:
// U_1 uniform, then U_k inverts y -> K_{C^{1:k}}(U_{1:k-1},[0,y]).
inline SampleBatch sample_conditional(const ArchCopula& cop, std::size_t n, std::uint64_t seed) {
    require(n >= 1, "sample_conditional: n must be >= 1");
    const Generator& gen = cop.generator();
    const int d = cop.dim();
    SampleBatch batch{n, d, {}, {}, {}, SampleMethod::conditional, seed};
    batch.rows.resize(n * static_cast<std::size_t>(d));
    batch.cvals.resize(n);
    batch.radii.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        CounterRng rng(seed ^ 0x636F6E64ULL, i);
        double u1 = rng.next_double();
        batch.rows[i * static_cast<std::size_t>(d)] = u1;
        double s = gen.phi(u1);  // running sum of phi(U_1..U_{k-1})
        for (int k = 2; k <= d; ++k) {
            double v = rng.next_double();
            double w = detail::invert_kernel_w(gen, s, k, v);
            double y = gen.psi(std::max(w - s, 0.0));
            batch.rows[i * static_cast<std::size_t>(d) + (k - 1)] = std::min(1.0, std::max(0.0, y));
            s = w;  // phi(psi(w - s)) = w - s on the decreasing range
        }
        batch.cvals[i] = gen.psi(s);
        batch.radii[i] = 1.0 / s;
    }
    return batch;
}

inline SampleBatch sample(const ArchCopula& cop, SampleMethod method, std::size_t n,
                          std::uint64_t seed) {
    return method == SampleMethod::radial ? sample_radial(cop, n, seed)
                                          : sample_conditional(cop, n, seed);
}

}  // namespace willcop
