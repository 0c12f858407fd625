#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spectra_lab/io.hpp"
#include "spectra_lab/random_models.hpp"
#include "spectra_lab/spectra_lab.hpp"
#include "spectra_lab/svg.hpp"

namespace spectra_lab::cli {

using io::json;

enum exit_code : int { ok = 0, input_error = 1, incomplete = 2, capacity_error = 3 };

inline int exit_for(errc c) {
    switch (c) {
    case errc::capacity: return capacity_error;
    case errc::indeterminate: return incomplete;
    default: return input_error;
    }
}

struct RunConfig {
    std::uint64_t budget = default_word_budget;
    double tol = 1e-6;
    std::string format = "json";
    std::string out;
    std::uint64_t seed = 1;
};

struct Output {
    std::string text;
    int code = ok;
};

// --- parsing helpers -------------------------------------------------------

inline std::vector<std::string> split(const std::string& s, char sep = ',') {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

inline std::vector<int> int_list(const std::string& s, const char* what) {
    std::vector<int> out;
    for (const auto& x : split(s)) {
        Rational r = parse_rational(x);
        require(denominator(r) == 1, errc::input, std::string(what) + ": '" + x + "' is not an integer");
        out.push_back(static_cast<int>(numerator(r)));
    }
    require(!out.empty(), errc::input, std::string(what) + ": empty list");
    return out;
}

inline std::vector<Rational> rational_list(const std::string& s, const char* what) {
    std::vector<Rational> out;
    for (const auto& x : split(s)) out.push_back(parse_rational(x));
    require(!out.empty(), errc::input, std::string(what) + ": empty list");
    return out;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline void need_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
    for (const char* f : allowed)
        if (cfg.format == f) return;
    std::string list;
    for (const char* f : allowed) list += std::string(list.empty() ? "" : ", ") + f;
    fail(errc::input, "format '" + cfg.format + "' not supported here (use " + list + ")");
}

// --- dim -------------------------------------------------------------------

struct DimArgs {
    std::string rates, gauss_digits, spec;
    int depth = 0;
};

inline Output cmd_dim(const DimArgs& a, const RunConfig& cfg) {
    need_format(cfg, {"json"});
    int sources = !a.rates.empty() + !a.gauss_digits.empty() + !a.spec.empty();
    require(sources == 1, errc::input, "dim needs exactly one of --rates, --gauss-digits, --spec");
    json j;
    DimBounds b;
    if (!a.rates.empty()) {
        std::vector<double> r;
        for (const auto& x : rational_list(a.rates, "--rates")) r.push_back(to_double(x));
        double d = moran_dimension(r);
        b = {d, d, 1, true};
        j["source"] = "rates";
    } else {
        CantorSpec c = !a.spec.empty() ? io::cantor_from_json(io::read_file(a.spec))
                                       : gauss_cantor(int_list(a.gauss_digits, "--gauss-digits"));
        b = a.depth > 0 ? beta_n_bounds(c, a.depth, cfg.budget) : hausdorff_dim(c, cfg.tol, cfg.budget);
        j["source"] = a.spec.empty() ? "gauss" : "spec";
        if (c.is_gauss()) j["digits"] = c.digits();
    }
    json d = io::dim_json(b);
    for (auto& [k, v] : d.items()) j[k] = v;
    j["tol"] = io::number(cfg.tol);
    return {dump(j), b.complete ? ok : incomplete};
}

// --- transitions -----------------------------------------------------------

struct TransitionArgs {
    std::string bundle, sft, potential, rates;
    bool random = false, symmetric = false;
    std::string cf_digits;
    int window = 3;
    std::string t, t_range;
    int steps = 12;
};

inline std::string curve_svg(const PhaseReport& r) {
    svg::Series dl{"dim lower", "#1f77b4", {}, true}, du{"dim upper", "#aec7e8", {}, true};
    svg::Series Dl{"D lower", "#d62728", {}, true}, Du{"D upper", "#ff9896", {}, true};
    for (const auto& row : r.table) {
        double t = to_double(row.t);
        dl.points.push_back({t, row.dim.lower});
        du.points.push_back({t, row.dim.upper});
        Dl.points.push_back({t, row.D.lower});
        Du.points.push_back({t, row.D.upper});
    }
    return svg::plot({du, dl, Du, Dl}, "sublevel dimension", "t", "dimension", 1.0);
}

inline json windowed_json(const WindowedSublevel& w) {
    return {{"window", w.window},
            {"t", io::rational_json(w.t)},
            {"in", w.in},
            {"out", w.out},
            {"uncertain", w.uncertain},
            {"dim", io::dim_json(w.dim())},
            {"D", io::dim_json(w.D())}};
}

inline Output cmd_transitions(const TransitionArgs& a, const RunConfig& cfg) {
    if (!a.cf_digits.empty()) {
        need_format(cfg, {"json"});
        auto digits = int_list(a.cf_digits, "--cf-digits");
        json j;
        j["mode"] = "windowed_cf";
        j["digits"] = digits;
        if (!a.t.empty()) {
            auto ws = windowed_cf_sublevel(digits, a.window, parse_rational(a.t), cfg.budget);
            j["sublevel"] = windowed_json(ws);
        }
        if (!a.t_range.empty()) {
            auto r = rational_list(a.t_range, "--t-range");
            require(r.size() == 2 && r[0] < r[1], errc::input, "--t-range needs lo,hi with lo < hi");
            auto br = windowed_crossing(digits, a.window, r[0], r[1], a.steps, cfg.budget);
            j["crossing"] = {{"window", br.window},
                             {"separated", br.separated},
                             {"t_below", io::rational_json(br.t_below)},
                             {"t_above", io::rational_json(br.t_above)},
                             {"dim_below", io::dim_json(br.at_below)},
                             {"dim_above", io::dim_json(br.at_above)}};
            if (!br.separated) return {dump(j), incomplete};
        }
        require(!a.t.empty() || !a.t_range.empty(), errc::input, "windowed mode needs --t or --t-range");
        return {dump(j), ok};
    }

    Bundle b;
    std::string source;
    if (a.random) {
        Rng rng(cfg.seed);
        b = random_bundle(rng, a.symmetric);
        source = "random";
    } else if (!a.bundle.empty()) {
        b = io::bundle_from_json(io::read_file(a.bundle));
        source = a.bundle;
    } else {
        require(!a.sft.empty() && !a.potential.empty() && !a.rates.empty(), errc::input,
                "transitions needs --bundle, --random, or all of --sft, --potential, --rates");
        b.sft = io::sft_from_json(io::read_file(a.sft));
        b.potential = as_table(io::potential_from_json(io::read_file(a.potential), b.sft));
        b.rates = io::rates_from_json(io::read_file(a.rates));
        source = a.sft;
    }
    b.rates.check(b.sft.size());
    PhaseReport rep = phase_transitions(b, cfg.budget);
    int code = rep.indeterminate() ? incomplete : ok;
    if (cfg.format == "csv") return {io::phase_csv(rep), code};
    if (cfg.format == "svg") return {curve_svg(rep), code};
    need_format(cfg, {"json", "csv", "svg"});
    json j = io::phase_json(rep);
    json out;
    out["source"] = source;
    if (a.random) {
        out["seed"] = cfg.seed;
        out["symmetric"] = a.symmetric;
        out["bundle"] = io::bundle_json(b);
    }
    for (auto& [k, v] : j.items()) out[k] = v;
    return {dump(out), code};
}

// --- classical -------------------------------------------------------------

struct ClassicalArgs {
    std::string below;
    int max_period = 0;
    long long limit = 1000000;
    bool constants = false, lambda4 = false;
};

inline Output cmd_classical(const ClassicalArgs& a, const RunConfig& cfg) {
    need_format(cfg, {"json", "csv"});
    bool markov = !a.below.empty() || (!a.constants && !a.lambda4);
    json j;
    std::string csv = "name,symbolic,value,witness,cross_checked\n";
    if (markov) {
        QuadSurd below = a.below.empty() ? QuadSurd(3) : QuadSurd::from_rational(parse_rational(a.below));
        std::optional<SpectrumSample> sample;
        SftSpec two = SftSpec::full(2);
        if (a.max_period > 0) sample = spectrum_sample(two, CfPotential{}, a.max_period, cfg.budget);
        json rows = json::array();
        for (const auto& e : markov_tree(a.limit)) {
            if (!(e.value < below)) continue;
            if (a.max_period > 0 && static_cast<int>(e.word.size()) > a.max_period) continue;
            json r = io::surd_json(e.value);
            r["m"] = io::bigint_json(e.m);
            r["word"] = two.format(e.word);
            r["cross_checked"] = e.cross_checked && (!sample || sample->contains(e.value));
            rows.push_back(r);
            csv += "m=" + e.m.str() + "," + e.value.to_string() + "," + io::fmt12(e.value.to_double()) + ",(" +
                   two.format(e.word) + ")," + (r["cross_checked"].get<bool>() ? "1" : "0") + "\n";
        }
        j["markov"] = rows;
        if (sample) {
            // Periodic values below the cut that are not Markov-tree values.
            json extra = json::array();
            for (const auto& e : sample->entries) {
                if (!(e.value < below)) continue;
                bool known = false;
                for (const auto& row : rows) known = known || row["symbolic"] == e.value.to_string();
                if (!known) extra.push_back(io::entry_json(*sample, e));
            }
            j["sample_max_period"] = a.max_period;
            j["unexplained_sample_values"] = extra;
        }
    }
    if (a.constants) {
        json rows = json::array();
        for (const auto& c : named_constants()) {
            json r = io::surd_json(c.value);
            r["name"] = c.name;
            r["note"] = c.note;
            rows.push_back(r);
            csv += c.name + "," + c.value.to_string() + "," + io::fmt12(c.value.to_double()) + ",,\n";
        }
        j["constants"] = rows;
    }
    if (a.lambda4) {
        int p = a.max_period > 0 ? a.max_period : 6;
        auto rep = lambda4_consistency(p, cfg.budget);
        j["lambda4"] = {{"max_period", p},
                        {"ok", rep.ok()},
                        {"tree_values_present", rep.tree_values_present},
                        {"digit5_above_bound", rep.digit5_above_bound},
                        {"max_below_sqrt32", rep.max_below_sqrt32},
                        {"tree_values_checked", rep.tree_values_checked},
                        {"digit5_values_checked", rep.digit5_values_checked},
                        {"max_value", io::surd_json(rep.max_lambda4)},
                        {"max_witness", SftSpec::full(4).format(rep.max_witness)},
                        {"failures", rep.failures}};
        csv += std::string("lambda4,") + (rep.ok() ? "pass" : "fail") + "," + io::fmt12(rep.max_lambda4.to_double()) + ",(" +
               SftSpec::full(4).format(rep.max_witness) + "),\n";
    }
    return {cfg.format == "csv" ? csv : dump(j), ok};
}

// --- sumset ----------------------------------------------------------------

struct SumsetArgs {
    std::vector<int> gauss;
    std::vector<std::string> specs;
    int middle_thirds = 0;
    int depth = 8;
};

inline Output cmd_sumset(const SumsetArgs& a, const RunConfig& cfg) {
    need_format(cfg, {"json"});
    std::vector<CantorSpec> sets;
    std::vector<std::string> names;
    for (int n : a.gauss) {
        require(n >= 1, errc::input, "--gauss needs N >= 1");
        std::vector<int> digits;
        for (int k = 1; k <= n; ++k) digits.push_back(k);
        sets.push_back(gauss_cantor(digits));
        names.push_back("C(" + std::to_string(n) + ")");
    }
    for (const auto& p : a.specs) {
        sets.push_back(io::cantor_from_json(io::read_file(p)));
        names.push_back(p);
    }
    for (int k = 0; k < a.middle_thirds; ++k) {
        sets.push_back(middle_thirds());
        names.push_back("middle thirds");
    }
    require(sets.size() == 2, errc::input, "sumset needs exactly two Cantor sets");
    require(a.depth >= 1, errc::input, "--depth must be at least 1");
    auto rep = sumset_report(sets[0], sets[1], a.depth, cfg.budget);
    json j;
    j["sets"] = names;
    j["depth"] = a.depth;
    json body = io::sumset_json(rep);
    for (auto& [k, v] : body.items()) j[k] = v;
    return {dump(j), ok};
}

// --- spectrum --------------------------------------------------------------

struct SpectrumArgs {
    std::string sft, potential, digits;
    int max_period = 6;
    std::string sublevel;
    std::string rates;
};

inline Output cmd_spectrum(const SpectrumArgs& a, const RunConfig& cfg) {
    need_format(cfg, {"json", "csv"});
    require(a.sft.empty() != a.digits.empty(), errc::input, "spectrum needs exactly one of --sft, --digits");
    require(a.max_period >= 1, errc::input, "--max-period must be at least 1");
    SftSpec spec;
    Potential f = CfPotential{};
    if (!a.digits.empty()) {
        auto d = int_list(a.digits, "--digits");
        std::sort(d.begin(), d.end());
        d.erase(std::unique(d.begin(), d.end()), d.end());
        std::vector<std::string> labels;
        for (int x : d) {
            require(x >= 1, errc::input, "digits must be positive");
            labels.push_back(std::to_string(x));
        }
        spec = SftSpec::full(static_cast<int>(d.size()), labels);
        require(a.potential.empty(), errc::input, "--digits uses the continued-fraction potential");
    } else {
        spec = io::sft_from_json(io::read_file(a.sft));
        require(!a.potential.empty(), errc::input, "--sft needs --potential");
        f = io::potential_from_json(io::read_file(a.potential), spec);
    }
    if (a.sublevel.empty()) {
        auto s = spectrum_sample(spec, f, a.max_period, cfg.budget);
        if (cfg.format == "csv") return {io::sample_csv(s), ok};
        json j = io::sample_json(s);
        j["max_period"] = a.max_period;
        return {dump(j), ok};
    }
    // Sublevel set of a table potential: Lagrange and Markov-side samples.
    require(is_table(f), errc::input, "--sublevel needs a table potential");
    RateTable rates;
    if (!a.rates.empty()) {
        rates = io::rates_from_json(io::read_file(a.rates));
    } else {
        rates.stable.assign(spec.size(), 0.5);
        rates.unstable.assign(spec.size(), 0.5);
    }
    auto fts = sublevel_set(spec, as_table(f), parse_rational(a.sublevel), rates, cfg.budget);
    auto lag = lagrange_finite_type(fts, f, a.max_period, cfg.budget);
    auto mk = markov_finite_type(fts, f, a.max_period, cfg.budget);
    if (cfg.format == "csv") return {"# lagrange\n" + io::sample_csv(lag) + "# markov\n" + io::sample_csv(mk), ok};
    json j;
    j["t"] = a.sublevel;
    j["max_period"] = a.max_period;
    j["sublevel"] = io::fts_json(fts);
    j["lagrange"] = io::sample_json(lag);
    j["markov"] = io::sample_json(mk);
    return {dump(j), ok};
}

// --- sft -------------------------------------------------------------------

struct SftArgs {
    std::string sft;
    int full = 0;
    int words = 0;
    std::string lift;
    bool components = false;
    int cycles = 0;
};

inline Output cmd_sft(const SftArgs& a, const RunConfig& cfg) {
    need_format(cfg, {"json"});
    require(a.sft.empty() != (a.full == 0), errc::input, "sft needs exactly one of --sft, --full");
    SftSpec spec = a.full > 0 ? SftSpec::full(a.full) : io::sft_from_json(io::read_file(a.sft));
    json j;
    j["spec"] = io::sft_json(spec);
    if (a.words > 0) {
        auto w = admissible_words(spec, a.words, cfg.budget);
        json list = json::array();
        for (const auto& x : w) list.push_back(spec.format(x));
        j["words"] = {{"n", a.words}, {"count", w.size()}, {"list", list}};
    }
    if (!a.lift.empty()) {
        auto pf = int_list(a.lift, "--lift");
        require(pf.size() == 2, errc::input, "--lift needs past,future");
        auto lift = window_lift(spec, pf[0], pf[1], cfg.budget);
        j["lift"] = {{"past", pf[0]},
                     {"future", pf[1]},
                     {"symbols", lift.spec.size()},
                     {"transitions", lift.spec.edge_count()},
                     {"spec", io::sft_json(lift.spec)}};
    }
    if (a.components) j["decomposition"] = io::decomposition_json(spec, irreducible_components(spec));
    if (a.cycles > 0) {
        json list = json::array();
        for (const auto& c : primitive_cycles(spec, a.cycles, cfg.budget)) list.push_back(spec.format(c));
        j["cycles"] = {{"max_period", a.cycles}, {"count", list.size()}, {"list", list}};
    }
    return {dump(j), ok};
}

// --- driver ----------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Dimension bounds, dynamical spectra and phase-transition parameters"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    app.add_option("--budget", cfg.budget, "enumeration budget")->check(CLI::PositiveNumber);
    app.add_option("--tol", cfg.tol, "tolerance")->check(CLI::PositiveNumber);
    app.add_option("--format", cfg.format, "json, csv or svg")->check(CLI::IsMember({"json", "csv", "svg"}));
    app.add_option("--out", cfg.out, "output file (default stdout)");
    app.add_option("--seed", cfg.seed, "random seed");

    DimArgs dim;
    auto* s_dim = app.add_subcommand("dim", "Hausdorff dimension bounds");
    s_dim->add_option("--rates", dim.rates, "affine contraction rates, comma separated");
    s_dim->add_option("--gauss-digits", dim.gauss_digits, "digit set of a Gauss-Cantor set");
    s_dim->add_option("--spec", dim.spec, "Cantor spec JSON file");
    s_dim->add_option("--depth", dim.depth, "fixed cylinder depth instead of --tol refinement");

    TransitionArgs tr;
    auto* s_tr = app.add_subcommand("transitions", "phase-transition parameters a, a_tilde, b");
    s_tr->add_option("--bundle", tr.bundle, "JSON file with sft, potential and rates");
    s_tr->add_option("--sft", tr.sft, "SFT JSON file");
    s_tr->add_option("--potential", tr.potential, "table potential JSON file");
    s_tr->add_option("--rates", tr.rates, "rate table JSON file");
    s_tr->add_flag("--random", tr.random, "random bundle from --seed");
    s_tr->add_flag("--symmetric", tr.symmetric, "random bundle with equal stable and unstable rates");
    s_tr->add_option("--cf-digits", tr.cf_digits, "windowed continued-fraction mode on this digit set");
    s_tr->add_option("--window", tr.window, "window half-width w (windowed mode)");
    s_tr->add_option("--t", tr.t, "threshold (windowed mode)");
    s_tr->add_option("--t-range", tr.t_range, "lo,hi bisection range (windowed mode)");
    s_tr->add_option("--steps", tr.steps, "bisection steps (windowed mode)");

    ClassicalArgs cl;
    auto* s_cl = app.add_subcommand("classical", "classical Markov and Lagrange spectra");
    s_cl->add_option("--below", cl.below, "list Markov values below this number");
    s_cl->add_option("--max-period", cl.max_period, "cross-check against periodic orbits up to this period");
    s_cl->add_option("--limit", cl.limit, "largest Markov number enumerated");
    s_cl->add_flag("--constants", cl.constants, "named constants");
    s_cl->add_flag("--lambda4", cl.lambda4, "consistency checks on four digits");

    SumsetArgs su;
    auto* s_su = app.add_subcommand("sumset", "arithmetic sum of two Cantor sets");
    s_su->add_option("--gauss", su.gauss, "C(N); repeatable");
    s_su->add_option("--spec", su.specs, "Cantor spec JSON file; repeatable");
    s_su->add_flag("--middle-thirds", su.middle_thirds, "middle-thirds set; repeatable");
    s_su->add_option("--depth", su.depth, "cylinder depth");

    SpectrumArgs sp;
    auto* s_sp = app.add_subcommand("spectrum", "periodic-orbit sample of a dynamical spectrum");
    s_sp->add_option("--sft", sp.sft, "SFT JSON file");
    s_sp->add_option("--potential", sp.potential, "potential JSON file");
    s_sp->add_option("--digits", sp.digits, "full shift on these digits with the continued-fraction potential");
    s_sp->add_option("--max-period", sp.max_period, "largest period");
    s_sp->add_option("--sublevel", sp.sublevel, "restrict to the sublevel set at this t");
    s_sp->add_option("--rates", sp.rates, "rate table for --sublevel");

    SftArgs sf;
    auto* s_sf = app.add_subcommand("sft", "subshift combinatorics");
    s_sf->add_option("--sft", sf.sft, "SFT JSON file");
    s_sf->add_option("--full", sf.full, "full shift on this many symbols");
    s_sf->add_option("--words", sf.words, "list admissible words of this length");
    s_sf->add_option("--lift", sf.lift, "window lift past,future");
    s_sf->add_flag("--components", sf.components, "irreducible components");
    s_sf->add_option("--cycles", sf.cycles, "primitive cycles up to this period");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    }

    Output result;
    try {
        if (*s_dim) result = cmd_dim(dim, cfg);
        else if (*s_tr) result = cmd_transitions(tr, cfg);
        else if (*s_cl) result = cmd_classical(cl, cfg);
        else if (*s_su) result = cmd_sumset(su, cfg);
        else if (*s_sp) result = cmd_spectrum(sp, cfg);
        else result = cmd_sft(sf, cfg);
    } catch (const error& e) {
        err << "error (" << errc_name(e.code()) << "): " << e.what() << "\n";
        return exit_for(e.code());
    }
    if (cfg.out.empty()) {
        out << result.text;
    } else {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f) {
            err << "error: cannot write " << cfg.out << "\n";
            return input_error;
        }
        f << result.text;
    }
    return result.code;
}

} // namespace spectra_lab::cli
