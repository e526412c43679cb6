#pragma once

#include <string>
#include <vector>

#include "io.hpp"
#include "measure.hpp"

namespace willcop {

// Measures shipped with the library; each has a spec file under data/ and a
// builder here so the two stay checkable against each other.

// Two atoms 32/49 δ_{1/8} + 17/49 δ_2 at d = 3: the workhorse non-strict
// measure whose copula carries kinks on two level surfaces.
inline MeasureDoc two_atom_d3_doc() {
    MeasureDoc doc;
    doc.dimension = 3;
    doc.atoms = {{Rat{1, 8}, Rat{32, 49}}, {Rat{2, 1}, Rat{17, 49}}};
    return doc;
}

// Atoms at 1/4 and 4 with uniform density 1/9 on [1,2) and [3,4): a
// non-strict d = 2 measure with two interior support gaps.
inline MeasureDoc gapped_mixture_d2_doc() {
    MeasureDoc doc;
    doc.dimension = 2;
    doc.atoms = {{Rat{1, 4}, Rat{2, 3}}, {Rat{4, 1}, Rat{1, 9}}};
    doc.density = {{Rat{1, 1}, Rat{2, 1}, {Rat{1, 9}}}, {Rat{3, 1}, Rat{4, 1}, {Rat{1, 9}}}};
    return doc;
}

// Atoms at 1/4 (2/3) and 2 (1/8) plus polynomial densities on [1,2) and
// [2,3): mixed discrete + absolutely continuous, ∫ t dγ = 233/288.
inline MeasureDoc atom_density_mix_d2_doc() {
    MeasureDoc doc;
    doc.dimension = 2;
    doc.atoms = {{Rat{1, 4}, Rat{2, 3}}, {Rat{2, 1}, Rat{1, 8}}};
    doc.density = {{Rat{1, 1}, Rat{2, 1}, {Rat{1, 3}, Rat{-1, 6}}},
                   {Rat{2, 1}, Rat{3, 1}, {Rat{27, 8}, Rat{-9, 4}, Rat{3, 8}}}};
    return doc;
}

// δ_{1/2} at d = 2: the normalized lower Frechet bound W.
inline MeasureDoc lower_frechet_d2_doc() {
    MeasureDoc doc;
    doc.dimension = 2;
    doc.atoms = {{Rat{1, 2}, Rat{1, 1}}};
    return doc;
}

// One Cantor component of weight 1 on [0,1]: purely singular, strict, and
// exactly normalized for d = 2 (∫(1-t) dμ_C = 1/2).
inline MeasureDoc cantor_singular_d2_doc() {
    MeasureDoc doc;
    doc.dimension = 2;
    doc.singular = {{Rat{1, 1}, Rat{0, 1}, Rat{1, 1}, "cantor", 48}};
    return doc;
}

inline WilliamsonMeasure two_atom_d3() { return doc_to_measure(two_atom_d3_doc()); }
inline WilliamsonMeasure gapped_mixture_d2() { return doc_to_measure(gapped_mixture_d2_doc()); }
inline WilliamsonMeasure atom_density_mix_d2() { return doc_to_measure(atom_density_mix_d2_doc()); }
inline WilliamsonMeasure lower_frechet_d2() { return doc_to_measure(lower_frechet_d2_doc()); }
inline WilliamsonMeasure cantor_singular_d2() { return doc_to_measure(cantor_singular_d2_doc()); }

struct BundledMeasure {
    std::string name;
    MeasureDoc doc;
};

inline std::vector<BundledMeasure> bundled_measures() {
    return {{"two_atom_d3", two_atom_d3_doc()},
            {"gapped_mixture_d2", gapped_mixture_d2_doc()},
            {"atom_density_mix_d2", atom_density_mix_d2_doc()},
            {"lower_frechet_d2", lower_frechet_d2_doc()},
            {"cantor_singular_d2", cantor_singular_d2_doc()}};
}

}  // namespace willcop
