#pragma once

#include <cmath>
#include <vector>

#include "copula.hpp"

namespace willcop {

struct DinfResult {
    double value = 0.0;           // grid max of |A(x) - B(x)|
    double lipschitz_slack = 0.0; // d/g: the grid underestimates the sup by at most this
};

// Uniform distance on a common g^d grid. Copulas are 1-Lipschitz per
// coordinate, so the true sup exceeds the grid max by at most d/g.
inline DinfResult dinf_distance(const ArchCopula& a, const ArchCopula& b, int g) {
    require(a.dim() == b.dim(), "dinf_distance: dimension mismatch");
    require(g >= 2, "dinf_distance: grid resolution must be >= 2");
    const int d = a.dim();
    std::vector<double> phia(static_cast<std::size_t>(g) + 1), phib(static_cast<std::size_t>(g) + 1);
    for (int i = 0; i <= g; ++i) {
        double u = static_cast<double>(i) / g;
        phia[static_cast<std::size_t>(i)] = a.generator().phi(u);
        phib[static_cast<std::size_t>(i)] = b.generator().phi(u);
    }
    DinfResult out;
    out.lipschitz_slack = static_cast<double>(d) / g;
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    while (true) {
        double sa = 0.0, sb = 0.0;
        for (int k = 0; k < d; ++k) {
            sa += phia[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
            sb += phib[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
        }
        out.value = std::max(out.value, std::abs(a.generator().psi(sa) - b.generator().psi(sb)));
        int k = 0;
        while (k < d && ++idx[static_cast<std::size_t>(k)] > g) {
            idx[static_cast<std::size_t>(k)] = 0;
            ++k;
        }
        if (k == d) break;
    }
    return out;
}

inline int default_dinf_grid(int d) {
    if (d == 2) return 256;
    if (d == 3) return 64;
    return 32;
}

}  // namespace willcop
