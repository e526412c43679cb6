#pragma once

#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "approx.hpp"
#include "bundled.hpp"
#include "copula.hpp"
#include "decomposition.hpp"
#include "io.hpp"
#include "lab.hpp"
#include "metrics.hpp"
#include "rng.hpp"
#include "sampler.hpp"
#include "stats.hpp"

namespace willcop {

struct Check {
    std::string name;
    double expected = 0.0;
    double got = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<Check> checks;
    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

struct VerificationReport {
    std::vector<CriterionResult> criteria;
    std::uint64_t seed = 0;
    bool overall() const {
        for (const auto& c : criteria)
            if (!c.pass()) return false;
        return true;
    }
};

struct VerifyOptions {
    std::uint64_t seed = 20240901;
    std::size_t mc_n = 100000;
    std::string data_dir = "data";
};

namespace verify_detail {

inline void record(CriterionResult& cr, const std::string& name, double expected, double got,
                   double tol) {
    Check c{name, expected, got, tol, std::abs(got - expected) <= tol};
    cr.checks.push_back(c);
}

inline void record_flag(CriterionResult& cr, const std::string& name, bool ok) {
    Check c{name, 1.0, ok ? 1.0 : 0.0, 0.0, ok};
    cr.checks.push_back(c);
}

// closed-form generator of the bundled two-atom d=3 measure
inline double two_atom_psi_reference(double z) {
    if (z <= 0.5) return (137.0 * z * z - 152.0 * z + 98.0) / 98.0;
    if (z <= 8.0) {
        double u = 1.0 - z / 8.0;
        return 32.0 / 49.0 * u * u;
    }
    return 0.0;
}

inline CriterionResult criterion1() {
    CriterionResult cr{1, "two-atom d=3 exact reproduction"};
    ArchCopula cop(Generator{two_atom_d3()});
    const Generator& gen = cop.generator();
    double worst = 0.0;
    for (int i = 0; i < 1024; ++i) {
        double z = 10.0 * i / 1023.0;
        worst = std::max(worst, std::abs(gen.psi(z) - two_atom_psi_reference(z)));
    }
    record(cr, "psi matches piecewise closed form on 1024 points", 0.0, worst, 1e-12);
    record(cr, "level mass at t=0", 32.0 / 49.0, cop.level_mass(0.0).mass, 0.0);
    record(cr, "level mass at t=225/392", 17.0 / 49.0, cop.level_mass(225.0 / 392.0).mass, 0.0);
    std::vector<double> x{0.9, 0.8};
    double y0 = cop.level_function(0.0, x);
    double right = one_sided_dm1(cop, x, y0, Side::right);
    double left = one_sided_dm1(cop, x, y0, Side::left);
    double expected = gen.phi_prime(x[0]) * gen.phi_prime(x[1]) / 49.0;
    record(cr, "right one-sided derivative at the zero-level surface", expected, right, 1e-10);
    record(cr, "left one-sided derivative at the zero-level surface", 0.0, left, 1e-10);
    record_flag(cr, "right one-sided derivative positive", right > 0.0);
    return cr;
}

inline CriterionResult criterion2() {
    CriterionResult cr{2, "gapped mixture d=2 reproduction"};
    ArchCopula cop(Generator{gapped_mixture_d2()});
    const Generator& gen = cop.generator();
    record(cr, "psi(1/4)", 17.0 / 24.0, gen.psi(0.25), 1e-12);
    record(cr, "psi(1/3)", 2.0 / 3.0, gen.psi(1.0 / 3.0), 1e-12);
    record(cr, "psi(1/2)", 11.0 / 18.0, gen.psi(0.5), 1e-12);
    record(cr, "psi(1)", 0.5, gen.psi(1.0), 1e-12);
    SupportReport rep = support_report(cop);
    record(cr, "zero-level graph mass", 2.0 / 3.0, rep.l0_mass, 1e-12);
    record_flag(cr, "three support bands", rep.support_bands.size() == 3);
    if (rep.support_bands.size() == 3) {
        record(cr, "band 1 is the zero level (lo)", 0.0, rep.support_bands[0].first, 1e-12);
        record(cr, "band 1 is the zero level (hi)", 0.0, rep.support_bands[0].second, 1e-12);
        record(cr, "band 2 lo", 0.5, rep.support_bands[1].first, 1e-12);
        record(cr, "band 2 hi", 11.0 / 18.0, rep.support_bands[1].second, 1e-12);
        record(cr, "band 3 lo", 2.0 / 3.0, rep.support_bands[2].first, 1e-12);
        record(cr, "band 3 hi", 17.0 / 24.0, rep.support_bands[2].second, 1e-12);
    }
    record(cr, "band mass [1/2, 11/18]", 1.0 / 9.0, cop.band_mass(0.5, 11.0 / 18.0), 1e-12);
    record(cr, "band mass [2/3, 17/24]", 2.0 / 9.0, cop.band_mass(2.0 / 3.0, 17.0 / 24.0), 1e-12);
    return cr;
}

inline CriterionResult criterion3(const VerifyOptions& opt) {
    CriterionResult cr{3, "mixed atom+density measure: slope and nondegenerate components"};
    WilliamsonMeasure m = atom_density_mix_d2();
    record(cr, "first moment of gamma", 233.0 / 288.0,
           m.stieltjes_monomial(1, Interval::left_open(0.0, kInf)).value, 1e-12);
    ArchCopula cop{Generator{m}};
    record(cr, "psi(1/3) on the linear branch", 1.0 - 233.0 / 864.0, cop.generator().psi(1.0 / 3.0),
           1e-12);
    ComponentMasses cm = component_masses(cop, opt.mc_n, opt.seed);
    record_flag(cr, "estimated by Monte-Carlo disintegration", cm.method == "mc");
    record_flag(cr, "discrete component exceeds 3 standard errors", cm.dis > 3.0 * cm.se_dis);
    record_flag(cr, "absolutely continuous component exceeds 3 standard errors",
                cm.abs > 3.0 * cm.se_abs);
    double se_sum = cm.se_abs + cm.se_dis + cm.se_sing;
    record(cr, "component masses sum to 1", 1.0, cm.abs + cm.dis + cm.sing, 3.0 * se_sum + 1e-9);
    return cr;
}

inline CriterionResult criterion4(const VerifyOptions& opt) {
    CriterionResult cr{4, "Kendall function: two forms agree; samplers match (DKW)"};
    for (const auto& bm : bundled_measures()) {
        ArchCopula cop{Generator{doc_to_measure(bm.doc)}};
        double worst = 0.0;
        for (int i = 0; i <= 256; ++i) {
            double t = static_cast<double>(i) / 256.0;
            auto [g, l] = cop.kendall_forms(t);
            worst = std::max(worst, std::abs(g - l));
        }
        record(cr, bm.name + ": gamma vs derivative-sum form on 257 points", 0.0, worst, 1e-9);
        // C(X) = psi(1/Z) with Z the tracked gamma-side coordinate, and F_K is
        // the pushforward of gamma under the same monotone map, so the KS
        // distance of C(X) from F_K equals the KS distance of Z from gamma.
        double band = dkw_epsilon(opt.mc_n, 0.01);
        const WilliamsonMeasure& m = cop.generator().measure();
        std::vector<double> candidates;
        for (const auto& a : m.atoms()) candidates.push_back(a.q);
        for (SampleMethod method : {SampleMethod::radial, SampleMethod::conditional}) {
            SampleBatch b = sample(cop, method, opt.mc_n, opt.seed);
            double d = ks_statistic(
                b.radii, [&](double z) { return m.cdf(z); },
                [&](double z) { return m.cdf_minus(z); }, candidates);
            record(cr, bm.name + ": C(X) within DKW band (" + to_string(method) + ")", 0.0, d, band);
        }
    }
    return cr;
}

inline CriterionResult criterion5(const VerifyOptions& opt) {
    CriterionResult cr{5, "kernel disintegration: margins, boxes, frequencies"};
    std::vector<std::string> names{"two_atom_d3", "gapped_mixture_d2", "atom_density_mix_d2"};
    for (const auto& bm : bundled_measures()) {
        if (std::find(names.begin(), names.end(), bm.name) == names.end()) continue;
        ArchCopula cop{Generator{doc_to_measure(bm.doc)}};
        const int d = cop.dim();
        double worst_margin = 0.0;
        for (int i = 1; i <= 9; ++i) {
            double y = 0.1 * i;
            worst_margin = std::max(worst_margin, std::abs(cop.kernel_margin_integral(y).value - y));
        }
        record(cr, bm.name + ": kernel margin identity on y=0.1..0.9", 0.0, worst_margin, 1e-5);

        CounterRng rng(opt.seed ^ 0xB0C5ULL, fnv1a(bm.name));
        SampleBatch batch = sample_radial(cop, opt.mc_n, opt.seed + 7);
        double worst_box = 0.0;
        bool freq_ok = true;
        for (int b = 0; b < 64; ++b) {
            std::vector<Interval> box;
            for (int j = 0; j < d; ++j) {
                double a = rng.next_double(), c = rng.next_double();
                box.push_back(Interval::left_open(std::min(a, c), std::max(a, c)));
            }
            double quad = cop.box_mass(box, 2e-7).value;
            // corner inclusion-exclusion over C
            double ie = 0.0;
            for (int mask = 0; mask < (1 << d); ++mask) {
                std::vector<double> corner(static_cast<std::size_t>(d));
                int ones = 0;
                for (int j = 0; j < d; ++j) {
                    bool hi = mask & (1 << j);
                    ones += hi;
                    corner[static_cast<std::size_t>(j)] = hi ? box[static_cast<std::size_t>(j)].hi
                                                             : box[static_cast<std::size_t>(j)].lo;
                }
                double sign = ((d - ones) % 2 == 0) ? 1.0 : -1.0;
                ie += sign * cop.cdf(corner);
            }
            worst_box = std::max(worst_box, std::abs(quad - ie));
            if (b < 32) {
                std::size_t hits = 0;
                for (std::size_t i = 0; i < batch.n; ++i) {
                    bool in = true;
                    for (int j = 0; j < d && in; ++j) {
                        double v = batch.at(i, j);
                        in = v > box[static_cast<std::size_t>(j)].lo &&
                             v <= box[static_cast<std::size_t>(j)].hi;
                    }
                    hits += in;
                }
                double freq = static_cast<double>(hits) / static_cast<double>(batch.n);
                double se = std::sqrt(std::max(quad * (1.0 - quad), 1e-9) /
                                      static_cast<double>(batch.n));
                freq_ok = freq_ok && std::abs(freq - quad) <= 4.0 * se + 1e-6;
            }
        }
        record(cr, bm.name + ": 64 boxes vs corner inclusion-exclusion", 0.0, worst_box, 1e-6);
        record_flag(cr, bm.name + ": 32 box frequencies within 4 SE", freq_ok);
    }
    return cr;
}

inline CriterionResult criterion6() {
    CriterionResult cr{6, "pathology certification at truncation 64"};
    WilliamsonMeasure m = dense_pathology_measure(3, 64);
    ArchCopula cop{Generator{m}};
    std::vector<double> x{0.7, 0.7};
    std::vector<NonDiffPoint> points = nondiff_points(cop, x);
    record_flag(cr, "a rich kink set is visible from x=(0.7,0.7)", points.size() >= 16);
    double max_gap = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
        max_gap = std::max(max_gap, points[i + 1].y - points[i].y);
    Check c{"max gap between sorted kink ordinates", 0.0, max_gap, 0.1};
    c.pass = max_gap < 0.1;
    cr.checks.push_back(c);
    // FD can only resolve kinks whose analytic gap clears double-precision
    // noise; certify every point above that floor.
    std::size_t certified = 0;
    bool all_pass = true;
    for (const auto& p : points) {
        if (p.gap <= 1e-6) continue;
        ++certified;
        NonDiffCertificate cert = certify_nondiff(cop, x, p.y, p.t);
        all_pass = all_pass && cert.verdict;
    }
    record_flag(cr, "at least 8 kinks FD-certifiable", certified >= 8);
    record_flag(cr, "every certificate passes FD bracketing", all_pass);
    return cr;
}

inline CriterionResult criterion7(const VerifyOptions& opt) {
    CriterionResult cr{7, "round trips: Kendall inversion, normalize, spec I/O"};
    for (const auto& bm : bundled_measures()) {
        WilliamsonMeasure m = doc_to_measure(bm.doc);
        ArchCopula cop{Generator{m}};
        double right = m.support_right();
        double worst = 0.0;
        for (int i = 1; i <= 256; ++i) {
            double z = right * 1.2 * i / 256.0;
            if (m.atom_mass_at(z) > 0.0) z *= 1.0 + 1e-7;  // continuity points only
            worst = std::max(worst, std::abs(cop.measure_cdf_from_kendall(z) - m.cdf(z)));
        }
        record(cr, bm.name + ": gamma([0,z]) = F_K(psi(1/z)) on 256 continuity points", 0.0, worst,
               1e-9 + 16.0 * m.singular_resolution_bound());
        WilliamsonMeasure n1 = normalize(m), n2 = normalize(n1);
        double drift = 0.0;
        for (std::size_t i = 0; i < n1.atoms().size(); ++i) {
            drift = std::max(drift, std::abs(n1.atoms()[i].q - n2.atoms()[i].q));
            drift = std::max(drift, std::abs(n1.atoms()[i].mass - n2.atoms()[i].mass));
        }
        for (std::size_t i = 0; i < n1.pieces().size(); ++i) {
            drift = std::max(drift, std::abs(n1.pieces()[i].from - n2.pieces()[i].from));
            drift = std::max(drift, std::abs(n1.pieces()[i].to - n2.pieces()[i].to));
        }
        for (std::size_t i = 0; i < n1.singular().size(); ++i) {
            drift = std::max(drift, std::abs(n1.singular()[i].lo - n2.singular()[i].lo));
            drift = std::max(drift, std::abs(n1.singular()[i].len - n2.singular()[i].len));
        }
        record(cr, bm.name + ": normalize idempotent (field drift)", 0.0, drift, 1e-12);
        MeasureDoc reparsed = measure_doc_from_json(measure_doc_to_json(bm.doc));
        record_flag(cr, bm.name + ": spec round trip exact on rationals", reparsed == bm.doc);
        std::string path = opt.data_dir + "/" + bm.name + ".json";
        bool file_ok = false;
        try {
            file_ok = load_measure_doc(path) == bm.doc;
        } catch (const std::exception&) {
            file_ok = false;
        }
        record_flag(cr, bm.name + ": bundled spec file matches builder", file_ok);
    }
    return cr;
}

inline CriterionResult criterion8() {
    CriterionResult cr{8, "denseness constructions: d-infinity decreasing, < 0.05 at n=100"};
    WilliamsonMeasure target = gapped_mixture_d2();
    ArchCopula cop{Generator{target}};
    for (ApproxKind kind : {ApproxKind::discrete, ApproxKind::abs, ApproxKind::singular}) {
        const char* kname = kind == ApproxKind::discrete ? "discrete"
                            : kind == ApproxKind::abs    ? "abs"
                                                         : "singular";
        ArchCopula c10{Generator{approximation_sequence(target, kind, 10)}};
        ArchCopula c100{Generator{approximation_sequence(target, kind, 100)}};
        double d10 = dinf_distance(c10, cop, 256).value;
        double d100 = dinf_distance(c100, cop, 256).value;
        record_flag(cr, std::string(kname) + ": d-infinity strictly decreasing", d100 < d10);
        Check c{std::string(kname) + ": d-infinity at n=100", 0.0, d100, 0.05};
        c.pass = d100 < 0.05;
        cr.checks.push_back(c);
    }
    return cr;
}

inline CriterionResult criterion9(const VerifyOptions& opt) {
    CriterionResult cr{9, "purity propagation is structural and exact"};
    auto run = [&](const std::string& name, const WilliamsonMeasure& m, double abs, double dis,
                   double sing) {
        ArchCopula cop{Generator{m}};
        ComponentMasses cm = component_masses(cop, opt.mc_n, opt.seed);
        record_flag(cr, name + ": structural path", cm.method == "structural");
        record(cr, name + ": abs", abs, cm.abs, 0.0);
        record(cr, name + ": dis", dis, cm.dis, 0.0);
        record(cr, name + ": sing", sing, cm.sing, 0.0);
    };
    run("purely discrete", two_atom_d3(), 0.0, 1.0, 0.0);
    run("purely absolutely continuous", normalize(full_support_base(2, ApproxKind::abs)), 1.0, 0.0,
        0.0);
    run("purely singular", cantor_singular_d2(), 0.0, 0.0, 1.0);
    return cr;
}

}  // namespace verify_detail

inline VerificationReport run_verification(const VerifyOptions& opt = {}) {
    using namespace verify_detail;
    VerificationReport rep;
    rep.seed = opt.seed;
    rep.criteria.push_back(criterion1());
    rep.criteria.push_back(criterion2());
    rep.criteria.push_back(criterion3(opt));
    rep.criteria.push_back(criterion4(opt));
    rep.criteria.push_back(criterion5(opt));
    rep.criteria.push_back(criterion6());
    rep.criteria.push_back(criterion7(opt));
    rep.criteria.push_back(criterion8());
    rep.criteria.push_back(criterion9(opt));
    return rep;
}

inline void print_report(const VerificationReport& rep, std::ostream& os) {
    for (const auto& cr : rep.criteria) {
        os << (cr.pass() ? "[PASS] " : "[FAIL] ") << "criterion " << cr.id << ": " << cr.title
           << "\n";
        if (!cr.pass())
            for (const auto& c : cr.checks)
                if (!c.pass)
                    os << "       check '" << c.name << "': expected " << c.expected << ", got "
                       << c.got << ", tolerance " << c.tolerance << "\n";
    }
    os << (rep.overall() ? "[PASS]" : "[FAIL]") << " overall\n";
}

inline nlohmann::json report_to_json(const VerificationReport& rep) {
    nlohmann::json j;
    j["seed"] = rep.seed;
    j["overall_pass"] = rep.overall();
    j["criteria"] = nlohmann::json::array();
    for (const auto& cr : rep.criteria) {
        nlohmann::json cj;
        cj["id"] = cr.id;
        cj["title"] = cr.title;
        cj["pass"] = cr.pass();
        cj["checks"] = nlohmann::json::array();
        for (const auto& c : cr.checks)
            cj["checks"].push_back({{"name", c.name},
                                    {"expected", c.expected},
                                    {"got", c.got},
                                    {"tolerance", c.tolerance},
                                    {"pass", c.pass}});
        j["criteria"].push_back(cj);
    }
    return j;
}

}  // namespace willcop
