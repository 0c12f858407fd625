#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectra_lab/cantor.hpp"
#include "spectra_lab/spectra.hpp"

namespace spectra_lab::io {

using json = nlohmann::ordered_json;

// --- numbers ---------------------------------------------------------------

// Round to 12 significant digits so dumps are short and reproducible.
inline double sig12(double x) {
    if (!std::isfinite(x) || x == 0.0) return x;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

inline json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return sig12(x);
}

inline std::string fmt12(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// "p/q" string, plain integer string, or a JSON number read through its
// decimal text (1.3 -> 13/10).
inline Rational rational_from_json(const json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number()) return parse_rational(j.dump());
    fail(errc::input, "expected a number or a \"p/q\" string, got " + j.dump());
}

inline json rational_json(const Rational& x) { return rational_to_string(x); }

inline json bigint_json(const BigInt& x) {
    if (x >= std::numeric_limits<long long>::min() && x <= std::numeric_limits<long long>::max())
        return static_cast<long long>(x);
    return x.str();
}

inline BigInt bigint_from_json(const json& j) {
    if (j.is_number_integer()) return BigInt(j.get<long long>());
    if (j.is_string()) {
        Rational r = parse_rational(j.get<std::string>());
        require(denominator(r) == 1, errc::input, "expected an integer, got " + j.dump());
        return numerator(r);
    }
    fail(errc::input, "expected an integer, got " + j.dump());
}

inline json surd_json(const QuadSurd& s) {
    json j;
    j["symbolic"] = s.to_string();
    j["value"] = number(s.to_double());
    j["p"] = bigint_json(s.p());
    j["q"] = bigint_json(s.q());
    j["r"] = bigint_json(s.r());
    j["d"] = bigint_json(s.d());
    return j;
}

inline QuadSurd surd_from_json(const json& j) {
    require(j.is_object(), errc::input, "surd must be an object {p, q, r, d}");
    return QuadSurd(bigint_from_json(j.at("p")), bigint_from_json(j.value("q", json(0))),
                    bigint_from_json(j.value("r", json(1))), bigint_from_json(j.value("d", json(0))));
}

inline json cf_json(const CfSequence& cf) { return {{"pre", cf.pre}, {"period", cf.period}}; }

inline CfSequence cf_from_json(const json& j) {
    CfSequence cf;
    cf.pre = j.value("pre", std::vector<int>{});
    cf.period = j.at("period").get<std::vector<int>>();
    return cf;
}

// --- files -----------------------------------------------------------------

inline json parse_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        fail(errc::input, origin + ": " + e.what());
    }
}

inline json read_file(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), errc::input, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), path);
}

// nlohmann errors (missing keys, wrong types) become input errors.
template <class F>
auto guarded(const std::string& what, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception& e) {
        fail(errc::input, what + ": " + e.what());
    }
}

// --- sft -------------------------------------------------------------------

inline json sft_json(const SftSpec& s) {
    json j;
    j["r"] = s.size();
    j["B"] = s.matrix();
    j["labels"] = s.labels();
    if (s.degenerate()) j["degenerate"] = true;
    return j;
}

inline SftSpec sft_from_json(const json& j) {
    return guarded("SFT spec", [&] {
        int r = j.at("r").get<int>();
        auto b = j.at("B").get<std::vector<std::vector<int>>>();
        auto labels = j.value("labels", std::vector<std::string>{});
        return SftSpec(r, b, labels, j.value("degenerate", false));
    });
}

inline json decomposition_json(const SftSpec& s, const Decomposition& dec) {
    json comps = json::array();
    for (std::size_t k = 0; k < dec.components.size(); ++k) {
        json members = json::array();
        for (int v : dec.components[k].members) members.push_back(s.label(v));
        comps.push_back({{"index", k}, {"members", members}, {"kind", kind_name(dec.components[k].kind)}});
    }
    json reach = json::array();
    for (std::size_t i = 0; i < dec.components.size(); ++i)
        for (std::size_t j = 0; j < dec.components.size(); ++j)
            if (dec.edge[i][j]) reach.push_back({i, j});
    json order = json::array();
    for (int v : dec.ordering) order.push_back(s.label(v));
    json pairs = json::array();
    for (auto [a, b] : transient_pairs(dec)) pairs.push_back({a, b});
    return {{"components", comps}, {"reachability", reach}, {"ordering", order}, {"transient_pairs", pairs}};
}

// --- cantor ----------------------------------------------------------------

inline json dim_json(const DimBounds& b) {
    return {{"lower", number(b.lower)}, {"upper", number(b.upper)}, {"depth", b.depth}, {"complete", b.complete}};
}

inline json cantor_json(const CantorSpec& c) {
    json j;
    json iv = json::array();
    for (const auto& i : c.intervals()) iv.push_back({rational_json(i.lo), rational_json(i.hi)});
    j["intervals"] = iv;
    j["B"] = c.combinatorics().matrix();
    json bb = json::array();
    for (const auto& b : c.branch_bounds()) bb.push_back({number(b.min), number(b.max)});
    j["branch_bounds"] = bb;
    j["affine"] = c.is_affine();
    j["orientation"] = c.orientation();
    if (c.is_gauss()) j["gauss_digits"] = c.digits();
    return j;
}

inline CantorSpec cantor_from_json(const json& j) {
    return guarded("Cantor spec", [&] {
        require(j.is_object(), errc::input, "Cantor spec must be an object");
        if (j.contains("gauss_digits")) return CantorSpec::gauss(j.at("gauss_digits").get<std::vector<int>>());
        std::vector<RationalInterval> iv;
        for (const auto& p : j.at("intervals")) {
            require(p.is_array() && p.size() == 2, errc::input, "interval must be [lo, hi]");
            iv.push_back({rational_from_json(p[0]), rational_from_json(p[1])});
        }
        auto b = j.at("B").get<std::vector<std::vector<int>>>();
        int r = static_cast<int>(iv.size());
        SftSpec comb(r, b, j.value("labels", std::vector<std::string>{}), j.value("degenerate", false));
        if (j.value("affine", false)) {
            CantorSpec c = CantorSpec::affine(iv, comb, j.value("orientation", std::vector<int>{}));
            if (j.contains("branch_bounds")) {
                const auto& bb = j.at("branch_bounds");
                require(bb.size() == static_cast<std::size_t>(r), errc::input, "need one branch bound per interval");
                for (int k = 0; k < r; ++k) {
                    double want = to_double(c.affine_expansion(k));
                    for (int e = 0; e < 2; ++e) {
                        double got = to_double(rational_from_json(bb[k][e]));
                        require(std::fabs(got - want) <= 1e-9 * want, errc::input,
                                "branch_bounds of interval " + std::to_string(k + 1) + " disagree with the affine geometry");
                    }
                }
            }
            return c;
        }
        std::vector<DerivBounds> bounds;
        for (const auto& p : j.at("branch_bounds")) {
            require(p.is_array() && p.size() == 2, errc::input, "branch bound must be [min, max]");
            bounds.push_back({round_down(to_double(rational_from_json(p[0]))), round_up(to_double(rational_from_json(p[1])))});
        }
        return CantorSpec::bounded(iv, comb, bounds);
    });
}

inline json thickness_json(const Thickness& t) {
    return {{"lower", number(t.lower)}, {"upper", number(t.upper)}, {"depth", t.depth}};
}

inline json sumset_json(const SumsetReport& r) {
    json j;
    if (r.interval) j["interval"] = {number(r.interval->lo), number(r.interval->hi)};
    else j["interval"] = nullptr;
    j["span"] = {number(r.span.lo), number(r.span.hi)};
    j["thickness"] = {thickness_json(r.thickness1), thickness_json(r.thickness2)};
    j["cover_gap_free"] = r.cover_gap_free;
    j["cover_depth"] = r.cover_depth;
    j["reason"] = r.reason;
    return j;
}

// --- potentials and rates --------------------------------------------------

inline json potential_json(const Potential& f, const SftSpec& spec) {
    if (!is_table(f)) return {{"kind", "cf"}, {"depth", std::get<CfPotential>(f).depth}};
    const auto& t = std::get<TablePotential>(f);
    json values = json::object();
    for (const auto& [w, v] : t.values) values[spec.format(w)] = rational_json(v);
    return {{"kind", "table"}, {"past", t.past}, {"future", t.future}, {"values", values}};
}

inline Potential potential_from_json(const json& j, const SftSpec& spec) {
    return guarded("potential", [&]() -> Potential {
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "cf") {
            CfPotential f;
            f.depth = j.value("depth", 12);
            require(f.depth >= 1, errc::input, "cf truncation depth must be at least 1");
            return f;
        }
        require(kind == "table", errc::input, "potential kind must be \"table\" or \"cf\"");
        TablePotential f;
        f.past = j.value("past", 0);
        f.future = j.value("future", 0);
        require(f.past >= 0 && f.future >= 0, errc::input, "window offsets must be non-negative");
        for (const auto& [key, value] : j.at("values").items()) {
            Word w = spec.parse(key);
            require(static_cast<int>(w.size()) == f.window(), errc::input, "window '" + key + "' has the wrong length");
            require(spec.is_admissible(w), errc::input, "window '" + key + "' is not admissible");
            f.values[w] = rational_from_json(value);
        }
        check_covers(spec, f);
        return f;
    });
}

inline json rates_json(const RateTable& r) {
    json s = json::array(), u = json::array();
    for (double x : r.stable) s.push_back(x);
    for (double x : r.unstable) u.push_back(x);
    return {{"stable", s}, {"unstable", u}};
}

inline RateTable rates_from_json(const json& j) {
    return guarded("rate table", [&] {
        RateTable r;
        r.stable = j.at("stable").get<std::vector<double>>();
        r.unstable = j.at("unstable").get<std::vector<double>>();
        return r;
    });
}

inline json bundle_json(const Bundle& b) {
    return {{"sft", sft_json(b.sft)}, {"potential", potential_json(b.potential, b.sft)}, {"rates", rates_json(b.rates)}};
}

inline Bundle bundle_from_json(const json& j) {
    return guarded("bundle", [&] {
        Bundle b;
        b.sft = sft_from_json(j.at("sft"));
        Potential f = potential_from_json(j.at("potential"), b.sft);
        b.potential = as_table(f);
        b.rates = rates_from_json(j.at("rates"));
        b.rates.check(b.sft.size());
        return b;
    });
}

// --- spectra ---------------------------------------------------------------

inline json entry_json(const SpectrumSample& s, const SpectrumEntry& e) {
    json j = surd_json(e.value);
    j["error"] = number(e.error);
    j["witness"] = s.witness_text(e);
    j["bridged"] = e.bridged;
    return j;
}

inline json sample_json(const SpectrumSample& s) {
    json entries = json::array();
    for (const auto& e : s.entries) entries.push_back(entry_json(s, e));
    return {{"kind", s.kind}, {"count", s.entries.size()}, {"entries", entries}};
}

inline std::string sample_csv(const SpectrumSample& s) {
    std::string out = "value,symbolic,witness,error\n";
    for (const auto& e : s.entries)
        out += fmt12(e.approx) + "," + e.value.to_string() + "," + s.witness_text(e) + "," + fmt12(e.error) + "\n";
    return out;
}

inline json crossing_json(const Crossing& c) {
    json j;
    j["status"] = status_name(c.status);
    if (c.status != CrossingStatus::none) {
        j["t"] = rational_json(c.t);
        j["t_value"] = number(to_double(c.t));
        j["below"] = dim_json(c.below);
        j["at"] = dim_json(c.at);
    } else {
        j["t"] = nullptr;
    }
    if (!c.detail.empty()) j["detail"] = c.detail;
    return j;
}

inline json phase_json(const PhaseReport& r) {
    json table = json::array();
    for (const auto& row : r.table)
        table.push_back({{"t", rational_json(row.t)},
                         {"t_value", number(to_double(row.t))},
                         {"dim", dim_json(row.dim)},
                         {"D", dim_json(row.D)},
                         {"subhorseshoe", row.subhorseshoe},
                         {"kept", row.kept},
                         {"components", row.components},
                         {"transient_pairs", row.transient_pairs}});
    return {{"a", crossing_json(r.a)}, {"a_tilde", crossing_json(r.a_tilde)}, {"b", crossing_json(r.b)}, {"table", table}};
}

inline std::string phase_csv(const PhaseReport& r) {
    std::string out = "t,dim_lower,dim_upper,D_lower,D_upper,subhorseshoe\n";
    for (const auto& row : r.table)
        out += rational_to_string(row.t) + "," + fmt12(row.dim.lower) + "," + fmt12(row.dim.upper) + "," + fmt12(row.D.lower) +
               "," + fmt12(row.D.upper) + "," + (row.subhorseshoe ? "1" : "0") + "\n";
    return out;
}

inline json fts_json(const FiniteTypeSet& fts) {
    json comps = json::array();
    for (std::size_t k = 0; k < fts.dec.components.size(); ++k) {
        const auto& c = fts.dec.components[k];
        json windows = json::array();
        for (int v : c.members) windows.push_back(fts.lift.spec.label(fts.kept[v]));
        json base = json::array();
        for (int s : fts.base_symbols(static_cast<int>(k))) base.push_back(fts.base.label(s));
        json item = {{"index", k}, {"kind", kind_name(c.kind)}, {"windows", windows}, {"symbols", base}};
        if (c.recurrent()) {
            item["d_s"] = dim_json(fts.dims[k].stable);
            item["d_u"] = dim_json(fts.dims[k].unstable);
            item["dim"] = dim_json(fts.dims[k].total());
        }
        comps.push_back(item);
    }
    json tr = json::array();
    for (const auto& t : fts.transients) tr.push_back({{"from", t.from}, {"to", t.to}, {"dim", dim_json(t.dims)}});
    return {{"kept_windows", fts.kept.size()},
            {"lifted_windows", fts.lift.windows.size()},
            {"components", comps},
            {"transient_pairs", tr},
            {"dim", dim_json(dim_sublevel(fts))},
            {"D", dim_json(D_of_t(fts))}};
}

} // namespace spectra_lab::io
