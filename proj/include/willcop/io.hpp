#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "measure.hpp"

namespace willcop {

// Exact rational "p/q" as carried by measure spec files. Kept verbatim
// through parse -> serialize -> parse round trips.
struct Rat {
    long long num = 0;
    long long den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rat&) const = default;
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

using NumTok = std::variant<double, Rat>;

inline double tok_value(const NumTok& t) {
    return std::holds_alternative<Rat>(t) ? std::get<Rat>(t).value() : std::get<double>(t);
}

inline bool operator==(const NumTok& a, const NumTok& b) {
    if (a.index() != b.index()) return false;
    if (std::holds_alternative<Rat>(a)) return std::get<Rat>(a) == std::get<Rat>(b);
    return std::get<double>(a) == std::get<double>(b);
}

struct AtomTok {
    NumTok q, mass;
    bool operator==(const AtomTok&) const = default;
};
struct PieceTok {
    NumTok from, to;
    std::vector<NumTok> coeffs;
    bool operator==(const PieceTok&) const = default;
};
struct SingularTok {
    NumTok weight, carrier_lo, carrier_len;
    std::string family = "cantor";
    int depth = 24;
    bool operator==(const SingularTok&) const = default;
};

// Parsed measure spec document; tok values preserve the rational spelling.
struct MeasureDoc {
    int dimension = 2;
    std::vector<AtomTok> atoms;
    std::vector<PieceTok> density;
    std::vector<SingularTok> singular;
    bool operator==(const MeasureDoc&) const = default;
};

inline Rat parse_rational(const std::string& s) {
    auto slash = s.find('/');
    require(slash != std::string::npos && slash > 0 && slash + 1 < s.size(),
            "measure spec: malformed rational '" + s + "'");
    Rat r;
    try {
        r.num = std::stoll(s.substr(0, slash));
        r.den = std::stoll(s.substr(slash + 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("measure spec: malformed rational '" + s + "'");
    }
    require(r.den != 0, "measure spec: zero denominator in '" + s + "'");
    return r;
}

inline NumTok tok_from_json(const nlohmann::json& j, const std::string& where) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw std::invalid_argument("measure spec: expected number or \"p/q\" at " + where);
}

inline nlohmann::json tok_to_json(const NumTok& t) {
    if (std::holds_alternative<Rat>(t)) return std::get<Rat>(t).str();
    return std::get<double>(t);
}

inline MeasureDoc measure_doc_from_json(const nlohmann::json& j) {
    MeasureDoc doc;
    require(j.is_object() && j.contains("dimension"), "measure spec: missing 'dimension'");
    doc.dimension = j.at("dimension").get<int>();
    if (j.contains("atoms"))
        for (const auto& a : j.at("atoms"))
            doc.atoms.push_back({tok_from_json(a.at("q"), "atoms.q"), tok_from_json(a.at("mass"), "atoms.mass")});
    if (j.contains("density"))
        for (const auto& p : j.at("density")) {
            PieceTok tok{tok_from_json(p.at("from"), "density.from"), tok_from_json(p.at("to"), "density.to"), {}};
            for (const auto& c : p.at("coeffs")) tok.coeffs.push_back(tok_from_json(c, "density.coeffs"));
            doc.density.push_back(std::move(tok));
        }
    if (j.contains("singular"))
        for (const auto& s : j.at("singular")) {
            const auto& carrier = s.at("carrier");
            require(carrier.is_array() && carrier.size() == 2, "measure spec: carrier must be [u, s]");
            SingularTok tok{tok_from_json(s.at("weight"), "singular.weight"),
                            tok_from_json(carrier[0], "singular.carrier[0]"),
                            tok_from_json(carrier[1], "singular.carrier[1]"),
                            s.value("family", std::string("cantor")), s.value("depth", 24)};
            require(tok.family == "cantor", "measure spec: unknown singular family '" + tok.family + "'");
            doc.singular.push_back(std::move(tok));
        }
    return doc;
}

inline nlohmann::json measure_doc_to_json(const MeasureDoc& doc) {
    nlohmann::json j;
    j["dimension"] = doc.dimension;
    j["atoms"] = nlohmann::json::array();
    for (const auto& a : doc.atoms)
        j["atoms"].push_back({{"q", tok_to_json(a.q)}, {"mass", tok_to_json(a.mass)}});
    j["density"] = nlohmann::json::array();
    for (const auto& p : doc.density) {
        nlohmann::json coeffs = nlohmann::json::array();
        for (const auto& c : p.coeffs) coeffs.push_back(tok_to_json(c));
        j["density"].push_back({{"from", tok_to_json(p.from)}, {"to", tok_to_json(p.to)}, {"coeffs", coeffs}});
    }
    j["singular"] = nlohmann::json::array();
    for (const auto& s : doc.singular)
        j["singular"].push_back({{"weight", tok_to_json(s.weight)},
                                 {"carrier", {tok_to_json(s.carrier_lo), tok_to_json(s.carrier_len)}},
                                 {"family", s.family},
                                 {"depth", s.depth}});
    return j;
}

inline WilliamsonMeasure doc_to_measure(const MeasureDoc& doc, std::optional<int> dim_override = {}) {
    std::vector<Atom> atoms;
    for (const auto& a : doc.atoms) atoms.push_back({tok_value(a.q), tok_value(a.mass)});
    std::vector<DensityPiece> pieces;
    for (const auto& p : doc.density) {
        std::vector<double> coeffs;
        for (const auto& c : p.coeffs) coeffs.push_back(tok_value(c));
        pieces.push_back({tok_value(p.from), tok_value(p.to), Poly(std::move(coeffs))});
    }
    std::vector<SingularComponent> sing;
    for (const auto& s : doc.singular) {
        SingularComponent comp;
        comp.weight = tok_value(s.weight);
        comp.lo = tok_value(s.carrier_lo);
        comp.len = tok_value(s.carrier_len);
        comp.depth = s.depth;
        sing.push_back(std::move(comp));
    }
    return WilliamsonMeasure(dim_override.value_or(doc.dimension), std::move(atoms), std::move(pieces),
                             std::move(sing));
}

inline MeasureDoc load_measure_doc(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open measure spec '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("measure spec '" + path + "': " + e.what());
    }
    return measure_doc_from_json(j);
}

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::uint64_t measure_hash(const MeasureDoc& doc) {
    return fnv1a(measure_doc_to_json(doc).dump());
}

// minimal RFC-4180 writer; numeric payloads never need quoting
class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ',';
            os_ << escape(cells[i]);
        }
        os_ << "\r\n";
    }

    static std::string num(double v) {
        std::ostringstream ss;
        ss.precision(17);
        ss << v;
        return ss.str();
    }

  private:
    static std::string escape(const std::string& s) {
        if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
        std::string out = "\"";
        for (char c : s) {
            if (c == '"') out += '"';
            out += c;
        }
        out += '"';
        return out;
    }

    std::ostream& os_;
};

}  // namespace willcop
