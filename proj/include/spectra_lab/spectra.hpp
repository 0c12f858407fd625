#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "spectra_lab/dimension.hpp"
#include "spectra_lab/error.hpp"
#include "spectra_lab/gauss.hpp"
#include "spectra_lab/parallel.hpp"
#include "spectra_lab/quad_surd.hpp"
#include "spectra_lab/rational.hpp"
#include "spectra_lab/sft.hpp"

namespace spectra_lab {

// Locally constant potential: f(x) = values[(x_{-past}, ..., x_{future})].
struct TablePotential {
    int past = 0;
    int future = 0;
    std::map<Word, Rational> values;

    int window() const noexcept { return past + future + 1; }
};

// f(x) = [a_0; a_1, a_2, ...] + [0; a_{-1}, a_{-2}, ...], digits read from the
// symbol labels.  depth is the truncation used for non-periodic evaluation.
struct CfPotential {
    int depth = 12;
};

using Potential = std::variant<TablePotential, CfPotential>;

inline bool is_table(const Potential& f) { return std::holds_alternative<TablePotential>(f); }

inline const TablePotential& as_table(const Potential& f) {
    require(is_table(f), errc::precondition, "operation needs a table potential");
    return std::get<TablePotential>(f);
}

// Every admissible window must have a value.
inline void check_covers(const SftSpec& spec, const TablePotential& f) {
    require(f.past >= 0 && f.future >= 0, errc::input, "window offsets must be non-negative");
    for_each_word(spec, f.window(), [&](const Word& w) {
        require(f.values.count(w) != 0, errc::input, "potential has no value for window " + spec.format(w));
    });
}

inline int digit_of(const SftSpec& spec, int symbol) {
    const std::string& label = spec.label(symbol);
    int d = 0;
    for (char ch : label) {
        require(ch >= '0' && ch <= '9', errc::input, "cf potential needs numeric labels, got '" + label + "'");
        d = d * 10 + (ch - '0');
        require(d < 1'000'000, errc::input, "digit label too large");
    }
    require(d >= 1 && !label.empty(), errc::input, "cf potential needs positive digit labels");
    return d;
}

inline std::vector<int> digits_of(const SftSpec& spec, const Word& w) {
    std::vector<int> out;
    for (int s : w) out.push_back(digit_of(spec, s));
    return out;
}

struct OrbitValue {
    QuadSurd value;
    double approx = 0.0;
    double error = 0.0; // zero when the value is exact
    int position = 0;   // a shift attaining the maximum
};

namespace detail {

inline Word rotate_left(const Word& w, std::size_t k) {
    Word out(w.begin() + k, w.end());
    out.insert(out.end(), w.begin(), w.begin() + k);
    return out;
}

// f at position i of the periodic sequence (cycle)^infinity, exactly.
inline QuadSurd cf_value_at(const std::vector<int>& digits, std::size_t i) {
    std::size_t p = digits.size();
    std::vector<int> forward(p), backward(p);
    for (std::size_t k = 0; k < p; ++k) {
        forward[k] = digits[(i + 1 + k) % p];
        backward[k] = digits[(i + p - 1 - k % p) % p];
    }
    return QuadSurd(digits[i]) + purely_periodic_value(forward) + purely_periodic_value(backward);
}

} // namespace detail

// max over the shifts of the periodic orbit; for periodic points the Markov and
// Lagrange values coincide.
inline OrbitValue orbit_value(const SftSpec& spec, const Word& cycle, const Potential& f) {
    require(spec.is_cycle(cycle), errc::input, "word '" + spec.format(cycle) + "' is not a cycle of the shift");
    std::size_t p = cycle.size();
    OrbitValue best;
    bool first = true;
    if (is_table(f)) {
        const auto& t = std::get<TablePotential>(f);
        for (std::size_t i = 0; i < p; ++i) {
            Word window(t.window());
            for (int k = 0; k < t.window(); ++k)
                window[k] = cycle[((static_cast<long long>(i) - t.past + k) % static_cast<long long>(p) + p) % p];
            auto it = t.values.find(window);
            require(it != t.values.end(), errc::input, "potential has no value for window " + spec.format(window));
            QuadSurd v = QuadSurd::from_rational(it->second);
            if (first || best.value < v) {
                best.value = v;
                best.position = static_cast<int>(i);
                first = false;
            }
        }
    } else {
        auto digits = digits_of(spec, cycle);
        for (std::size_t i = 0; i < p; ++i) {
            QuadSurd v = detail::cf_value_at(digits, i);
            if (first || best.value < v) {
                best.value = v;
                best.position = static_cast<int>(i);
                first = false;
            }
        }
    }
    best.approx = best.value.to_double();
    return best;
}

struct TruncatedValue {
    Rational value;
    double error = 0.0; // certified: |f - value| <= error
};

// f at position i of (cycle)^infinity with both expansions cut after `depth`
// digits; the error bound is 2 / q_depth^2 with q the smaller continuant.
inline TruncatedValue cf_truncated_value(const SftSpec& spec, const Word& cycle, int position, int depth) {
    require(spec.is_cycle(cycle), errc::input, "word is not a cycle of the shift");
    require(depth >= 1, errc::input, "truncation depth must be at least 1");
    auto digits = digits_of(spec, cycle);
    long long p = static_cast<long long>(digits.size());
    std::vector<int> fwd, bwd;
    for (int k = 1; k <= depth; ++k) {
        fwd.push_back(digits[((position + k) % p + p) % p]);
        bwd.push_back(digits[((position - k) % p + p) % p]);
    }
    Continuants cf = continuants(fwd), cb = continuants(bwd);
    TruncatedValue out;
    out.value = Rational(digits[((position % p) + p) % p]) + Rational(cf.p, cf.q) + Rational(cb.p, cb.q);
    BigInt q = std::min(cf.q, cb.q);
    out.error = 2.0 / (static_cast<double>(q) * static_cast<double>(q));
    return out;
}

struct SpectrumEntry {
    QuadSurd value;
    double approx = 0.0;
    double error = 0.0;
    Word witness;      // periodic word, or the left cycle of a bridged word
    Word bridge;       // bridged entries only
    Word tail;         // right cycle of a bridged word
    bool bridged = false;
};

struct SpectrumSample {
    SftSpec spec; // alphabet used to render witnesses
    std::string kind = "markov";
    std::vector<SpectrumEntry> entries;

    bool contains(const QuadSurd& v) const {
        return std::any_of(entries.begin(), entries.end(), [&](const SpectrumEntry& e) { return e.value == v; });
    }

    std::string witness_text(const SpectrumEntry& e) const {
        if (!e.bridged) return "(" + spec.format(e.witness) + ")";
        return "(" + spec.format(e.witness) + ")^inf." + spec.format(e.bridge) + ".(" + spec.format(e.tail) + ")^inf";
    }
};

namespace detail {

inline void sort_and_dedupe(std::vector<SpectrumEntry>& entries) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const SpectrumEntry& a, const SpectrumEntry& b) { return a.value < b.value; });
    entries.erase(std::unique(entries.begin(), entries.end(),
                              [](const SpectrumEntry& a, const SpectrumEntry& b) { return a.value == b.value; }),
                  entries.end());
}

} // namespace detail

// Value of every primitive cycle of period <= max_period, in cycle order.
inline std::vector<SpectrumEntry> cycle_values(const SftSpec& spec, const Potential& f, int max_period,
                                               std::uint64_t budget = default_word_budget) {
    if (is_table(f)) check_covers(spec, std::get<TablePotential>(f));
    auto cycles = primitive_cycles(spec, max_period, budget);
    return parallel_map(cycles.size(), [&](std::size_t k) {
        auto v = orbit_value(spec, cycles[k], f);
        SpectrumEntry e;
        e.value = v.value;
        e.approx = v.approx;
        e.error = v.error;
        e.witness = cycles[k];
        return e;
    });
}

// Inner approximation of the spectrum by periodic orbits: sorted, exact
// duplicates removed (the shortest, lexicographically first witness is kept).
inline SpectrumSample spectrum_sample(const SftSpec& spec, const Potential& f, int max_period,
                                      std::uint64_t budget = default_word_budget) {
    SpectrumSample s;
    s.spec = spec;
    s.entries = cycle_values(spec, f, max_period, budget);
    detail::sort_and_dedupe(s.entries);
    return s;
}

// j + 2 A_j: lower bound for values whose expansion uses the digit j
// infinitely often.
inline QuadSurd nj_lower_bound(int j) {
    require(j >= 1, errc::input, "j must be at least 1");
    return QuadSurd(j) + QuadSurd(2) * extremal_values(j).first;
}

// --- finite-type sets ------------------------------------------------------------

struct RateTable {
    std::vector<double> stable, unstable; // per base symbol, in (0,1)

    void check(int r) const {
        require(static_cast<int>(stable.size()) == r && static_cast<int>(unstable.size()) == r, errc::input,
                "rate table needs one stable and one unstable rate per symbol");
        for (double v : stable) require(v > 0.0 && v < 1.0, errc::input, "rates must lie in (0,1)");
        for (double v : unstable) require(v > 0.0 && v < 1.0, errc::input, "rates must lie in (0,1)");
    }
};

// Contraction brackets per kept node, stable and unstable.
struct NodeRates {
    std::vector<std::pair<double, double>> stable, unstable;
};

struct ComponentDims {
    DimBounds stable, unstable;
    DimBounds total() const { return sum_bounds(stable, unstable); }
};

struct TransientDims {
    int from = 0, to = 0; // component indices
    DimBounds dims;       // d_s(from) + d_u(to)
};

struct FiniteTypeSet {
    SftSpec base;
    WindowLift lift;
    std::vector<int> kept; // surviving lifted nodes
    SftSpec pruned;        // lifted shift on the kept nodes (local ids)
    Decomposition dec;
    std::vector<ComponentDims> dims;
    std::vector<TransientDims> transients;

    bool empty() const noexcept { return kept.empty(); }

    // Base symbols occurring at the centre of a component's windows.
    std::vector<int> base_symbols(int component) const {
        std::set<int> s;
        for (int v : dec.components[component].members) s.insert(lift.center(kept[v]));
        return {s.begin(), s.end()};
    }

    Word decode(const Word& local) const {
        Word out;
        for (int v : local) out.push_back(lift.center(kept[v]));
        return out;
    }
};

namespace detail {

inline DimBounds component_root(const FiniteTypeSet& fts, const std::vector<int>& members,
                                const std::vector<std::pair<double, double>>& rate, bool transpose) {
    std::vector<int> local(fts.pruned.size(), -1);
    for (std::size_t k = 0; k < members.size(); ++k) local[members[k]] = static_cast<int>(k);
    WeightedGraph g;
    g.n = static_cast<int>(members.size());
    for (int u : members)
        for (int v : fts.pruned.successors(u)) {
            if (local[v] < 0) continue;
            double lo = std::log(rate[u].first), hi = std::log(rate[u].second);
            lo = lo - 4e-16 * (1.0 + std::fabs(lo));
            hi = hi + 4e-16 * (1.0 + std::fabs(hi));
            if (transpose) g.add(local[v], local[u], lo, hi);
            else g.add(local[u], local[v], lo, hi);
        }
    return transfer_root(g, moran_tolerance);
}

} // namespace detail

inline void attach_dimensions(FiniteTypeSet& fts, const NodeRates& rates) {
    fts.dims.clear();
    fts.transients.clear();
    for (const auto& comp : fts.dec.components) {
        ComponentDims cd;
        if (comp.recurrent()) {
            cd.stable = detail::component_root(fts, comp.members, rates.stable, true);
            cd.unstable = detail::component_root(fts, comp.members, rates.unstable, false);
        }
        fts.dims.push_back(cd);
    }
    for (auto [i, j] : transient_pairs(fts.dec))
        fts.transients.push_back({i, j, sum_bounds(fts.dims[i].stable, fts.dims[j].unstable)});
}

// Lift, keep the windows accepted by allow(window), prune to the bi-infinite core,
// decompose.  Dimensions are attached separately.
template <class Allow>
FiniteTypeSet finite_type_set(const SftSpec& base, int past, int future, Allow&& allow,
                              std::uint64_t budget = default_word_budget) {
    FiniteTypeSet fts;
    fts.base = base;
    fts.lift = window_lift(base, past, future, budget);
    std::vector<bool> keep(fts.lift.spec.size());
    for (int v = 0; v < fts.lift.spec.size(); ++v) keep[v] = allow(fts.lift.windows[v]);
    fts.kept = recurrent_core(fts.lift.spec, keep);
    fts.pruned = fts.lift.spec.induced(fts.kept);
    fts.dec = irreducible_components(fts.pruned);
    return fts;
}

// Lambda_t for a table potential: windows with f > t are removed.
inline FiniteTypeSet sublevel_set(const SftSpec& spec, const TablePotential& f, const Rational& t, const RateTable& rates,
                                  std::uint64_t budget = default_word_budget) {
    check_covers(spec, f);
    rates.check(spec.size());
    FiniteTypeSet fts = finite_type_set(
        spec, f.past, f.future, [&](const Word& w) { return f.values.at(w) <= t; }, budget);
    NodeRates nr;
    for (int v : fts.kept) {
        int c = fts.lift.center(v);
        nr.stable.push_back({rates.stable[c], rates.stable[c]});
        nr.unstable.push_back({rates.unstable[c], rates.unstable[c]});
    }
    attach_dimensions(fts, nr);
    return fts;
}

// Maximum over components (subhorseshoes and trivial ones) and transient pairs.
inline DimBounds dim_sublevel(const FiniteTypeSet& fts) {
    DimBounds out;
    for (std::size_t k = 0; k < fts.dims.size(); ++k)
        if (fts.dec.components[k].recurrent()) out = max_bounds(out, fts.dims[k].total());
    for (const auto& t : fts.transients) out = max_bounds(out, t.dims);
    return out;
}

// Maximum over subhorseshoes only.
inline DimBounds D_of_t(const FiniteTypeSet& fts) {
    DimBounds out;
    for (std::size_t k = 0; k < fts.dims.size(); ++k)
        if (fts.dec.components[k].kind == ComponentKind::subhorseshoe) out = max_bounds(out, fts.dims[k].total());
    return out;
}

inline bool has_subhorseshoe(const FiniteTypeSet& fts) {
    return std::any_of(fts.dec.components.begin(), fts.dec.components.end(),
                       [](const Component& c) { return c.kind == ComponentKind::subhorseshoe; });
}

// --- phase transitions ---------------------------------------------------------

enum class CrossingStatus { found, none, indeterminate };

inline const char* status_name(CrossingStatus s) {
    switch (s) {
    case CrossingStatus::found: return "found";
    case CrossingStatus::none: return "none";
    case CrossingStatus::indeterminate: return "indeterminate";
    }
    return "unknown";
}

struct Crossing {
    CrossingStatus status = CrossingStatus::none;
    Rational t;       // threshold (when found or indeterminate)
    DimBounds below;  // bounds just below t (at the previous threshold, or the empty set)
    DimBounds at;     // bounds at t
    std::string detail;
};

struct ThresholdRow {
    Rational t;
    DimBounds dim, D;
    bool subhorseshoe = false;
    int kept = 0;
    int components = 0;
    int transient_pairs = 0;
};

struct PhaseReport {
    Crossing a, a_tilde, b;
    std::vector<ThresholdRow> table;

    bool indeterminate() const {
        return a.status == CrossingStatus::indeterminate || a_tilde.status == CrossingStatus::indeterminate ||
               b.status == CrossingStatus::indeterminate;
    }
};

namespace detail {

// First threshold whose bounds certify a value above 1; bounds touching or
// straddling 1 stop the scan as indeterminate.
template <class Pick>
Crossing first_crossing(const std::vector<ThresholdRow>& rows, Pick&& pick, const char* what) {
    Crossing c;
    DimBounds previous; // empty set below the first threshold
    for (const auto& row : rows) {
        DimBounds b = pick(row);
        if (b.upper < 1.0) {
            previous = b;
            continue;
        }
        c.t = row.t;
        c.below = previous;
        c.at = b;
        if (b.lower > 1.0) {
            c.status = CrossingStatus::found;
        } else {
            c.status = CrossingStatus::indeterminate;
            c.detail = std::string(what) + " bounds [" + std::to_string(b.lower) + ", " + std::to_string(b.upper) +
                       "] contain 1 at t = " + rational_to_string(row.t);
        }
        return c;
    }
    c.status = CrossingStatus::none;
    c.detail = std::string(what) + " stays below 1 at every threshold";
    return c;
}

} // namespace detail

// Exact scan over the finitely many values of a table potential.
inline PhaseReport phase_transitions(const SftSpec& spec, const TablePotential& f, const RateTable& rates,
                                     std::uint64_t budget = default_word_budget) {
    check_covers(spec, f);
    std::set<Rational> values;
    for_each_word(spec, f.window(), [&](const Word& w) { values.insert(f.values.at(w)); });
    PhaseReport rep;
    for (const Rational& t : values) {
        FiniteTypeSet fts = sublevel_set(spec, f, t, rates, budget);
        ThresholdRow row;
        row.t = t;
        row.dim = dim_sublevel(fts);
        row.D = D_of_t(fts);
        row.subhorseshoe = has_subhorseshoe(fts);
        row.kept = static_cast<int>(fts.kept.size());
        row.components = static_cast<int>(fts.dec.components.size());
        row.transient_pairs = static_cast<int>(fts.transients.size());
        rep.table.push_back(row);
    }
    rep.a = detail::first_crossing(rep.table, [](const ThresholdRow& r) { return r.dim; }, "dim_sublevel");
    rep.a_tilde = detail::first_crossing(rep.table, [](const ThresholdRow& r) { return r.D; }, "D_of_t");
    rep.b.status = CrossingStatus::none;
    rep.b.detail = "no threshold carries a subhorseshoe";
    DimBounds previous;
    for (const auto& row : rep.table) {
        if (row.subhorseshoe && row.D.lower > 0.0) {
            rep.b.status = CrossingStatus::found;
            rep.b.t = row.t;
            rep.b.below = previous;
            rep.b.at = row.dim;
            rep.b.detail.clear();
            break;
        }
        previous = row.dim;
    }
    return rep;
}

// Inputs of a threshold scan.
struct Bundle {
    SftSpec sft;
    TablePotential potential;
    RateTable rates;
};

inline PhaseReport phase_transitions(const Bundle& b, std::uint64_t budget = default_word_budget) {
    return phase_transitions(b.sft, b.potential, b.rates, budget);
}

// --- spectra of finite-type sets -------------------------------------------------

// Periodic orbits of the recurrent part (every cycle lies in one recurrent
// component).
inline SpectrumSample lagrange_finite_type(const FiniteTypeSet& fts, const Potential& f, int max_period,
                                           std::uint64_t budget = default_word_budget) {
    SpectrumSample s;
    s.spec = fts.base;
    s.kind = "lagrange";
    if (fts.empty()) return s;
    auto cycles = primitive_cycles(fts.pruned, max_period, budget);
    s.entries = parallel_map(cycles.size(), [&](std::size_t k) {
        Word base = fts.decode(cycles[k]);
        auto v = orbit_value(fts.base, base, f);
        SpectrumEntry e;
        e.value = v.value;
        e.approx = v.approx;
        e.error = v.error;
        e.witness = canonical_rotation(base);
        return e;
    });
    detail::sort_and_dedupe(s.entries);
    return s;
}

// Lagrange sample plus heteroclinic words (u)^inf . bridge . (v)^inf from a
// cycle of one recurrent component to a cycle of a component it reaches.
// Bridges are simple paths outside both components, of length < max_period.
inline SpectrumSample markov_finite_type(const FiniteTypeSet& fts, const Potential& f, int max_period,
                                         std::uint64_t budget = default_word_budget) {
    SpectrumSample s = lagrange_finite_type(fts, f, max_period, budget);
    s.kind = "markov";
    if (fts.empty() || fts.transients.empty()) return s;
    const auto& table = as_table(f);
    auto node_value = [&](int local) { return table.values.at(fts.lift.windows[fts.kept[local]]); };

    // Cycles through each node, rotated to start there.
    auto cycles = primitive_cycles(fts.pruned, max_period, budget);
    std::map<int, std::vector<Word>> through;
    for (const auto& c : cycles)
        for (std::size_t k = 0; k < c.size(); ++k) {
            auto& list = through[c[k]];
            Word rot = detail::rotate_left(c, k);
            if (std::find(list.begin(), list.end(), rot) == list.end()) list.push_back(rot);
        }

    std::uint64_t produced = 0;
    std::vector<SpectrumEntry> extra;
    for (const auto& pair : fts.transients) {
        const auto& from = fts.dec.components[pair.from];
        const auto& to = fts.dec.components[pair.to];
        for (int x : from.members) {
            // DFS over simple bridge paths leaving `from` at x and entering `to`.
            std::vector<int> path;
            std::vector<bool> on_path(fts.pruned.size(), false);
            std::function<void(int)> walk = [&](int node) {
                for (int nxt : fts.pruned.successors(node)) {
                    int cn = fts.dec.component_of[nxt];
                    if (cn == pair.to) {
                        for (const auto& u : through[x]) {
                            // u ends just before x repeats: rotate so x is last.
                            Word left = detail::rotate_left(u, 1);
                            for (const auto& v : through[nxt]) {
                                if (++produced > budget) check_budget(produced, budget, "bridged word enumeration");
                                Rational m = node_value(x);
                                for (int a : left) m = std::max(m, node_value(a));
                                for (int b : path) m = std::max(m, node_value(b));
                                for (int c : v) m = std::max(m, node_value(c));
                                SpectrumEntry e;
                                e.value = QuadSurd::from_rational(m);
                                e.approx = e.value.to_double();
                                e.bridged = true;
                                e.witness = fts.decode(left);
                                e.bridge = fts.decode(path);
                                e.tail = fts.decode(v);
                                extra.push_back(std::move(e));
                            }
                        }
                        continue;
                    }
                    if (cn == pair.from || on_path[nxt] || static_cast<int>(path.size()) + 1 >= max_period) continue;
                    if (!fts.dec.reachable(cn, pair.to)) continue;
                    on_path[nxt] = true;
                    path.push_back(nxt);
                    walk(nxt);
                    path.pop_back();
                    on_path[nxt] = false;
                }
            };
            (void)to;
            walk(x);
        }
    }
    s.entries.insert(s.entries.end(), extra.begin(), extra.end());
    detail::sort_and_dedupe(s.entries);
    return s;
}

// --- classical spectrum ----------------------------------------------------------

struct MarkovEntry {
    BigInt m;
    Word word;      // over the symbols {0,1} of the full 2-shift (digits 1 and 2)
    QuadSurd value; // sqrt(9 m^2 - 4) / m
    bool cross_checked = false; // value equals the orbit value of the word
};

// Markov numbers m <= limit with their Christoffel words.  The word tree
// (u, uv, v) -> (u, u.uv, uv), (uv, uv.v, v) runs alongside the Vieta moves
// of the triples, starting from (1,5,2) ~ ("11","1122","22") below (1,1,1).
inline std::vector<MarkovEntry> markov_tree(long long limit) {
    require(limit >= 1, errc::input, "limit must be at least 1");
    std::vector<MarkovEntry> out;
    auto push = [&](const BigInt& m, const Word& w) {
        MarkovEntry e;
        e.m = m;
        e.word = primitive_root(w);
        e.value = QuadSurd(0, 1, m, 9 * m * m - 4);
        out.push_back(std::move(e));
    };
    BigInt lim = limit;
    push(1, {0, 0});
    if (lim >= 2) push(2, {1, 1});
    struct Node {
        BigInt mu, muv, mv;
        Word u, uv, v;
    };
    std::vector<Node> stack;
    if (lim >= 5) stack.push_back({1, 5, 2, {0, 0}, {0, 0, 1, 1}, {1, 1}});
    while (!stack.empty()) {
        Node n = std::move(stack.back());
        stack.pop_back();
        push(n.muv, n.uv);
        BigInt left = 3 * n.mu * n.muv - n.mv, right = 3 * n.muv * n.mv - n.mu;
        if (left <= lim) {
            Word w = n.u;
            w.insert(w.end(), n.uv.begin(), n.uv.end());
            stack.push_back({n.mu, left, n.muv, n.u, w, n.uv});
        }
        if (right <= lim) {
            Word w = n.uv;
            w.insert(w.end(), n.v.begin(), n.v.end());
            stack.push_back({n.muv, right, n.mv, n.uv, w, n.v});
        }
    }
    std::sort(out.begin(), out.end(), [](const MarkovEntry& a, const MarkovEntry& b) { return a.m < b.m; });
    SftSpec two = SftSpec::full(2);
    for (auto& e : out) e.cross_checked = orbit_value(two, e.word, CfPotential{}).value == e.value;
    return out;
}

struct NamedConstant {
    std::string name;
    QuadSurd value;
    std::string note;
};

inline std::vector<NamedConstant> named_constants() {
    return {
        {"k1", QuadSurd::sqrt_of(5), "first Lagrange value, word (1)"},
        {"k2", QuadSurd(0, 2, 1, 2), "second Lagrange value, word (2)"},
        {"k3", QuadSurd(0, 1, 5, 221), "third Lagrange value, word (2211)"},
        {"freiman_c", QuadSurd(BigInt(2221564096LL), BigInt(283748), BigInt(491993569), BigInt(462)),
         "start of the largest half-line in L"},
        {"hall_ray", QuadSurd(6), "L contains [6, inf)"},
        {"sqrt12", QuadSurd::sqrt_of(12), "value of word (12); upper end of the bracket for a"},
        {"bumby_lower", QuadSurd::from_rational(Rational(333437, 100000)), "truncated decimal lower end of the bracket for a"},
        {"one_plus_sqrt21", QuadSurd(1, 1, 1, 21), "L and L_f(Lambda_4) agree below this value"},
        {"sqrt32", QuadSurd::sqrt_of(32), "max f on Lambda_4, attained by word (14)"},
        {"n5_bound", QuadSurd(20, 1, 5, 45), "5 + 2 A_5, lower bound when the digit 5 recurs"},
    };
}

struct Lambda4Report {
    bool tree_values_present = false;  // (i)
    bool digit5_above_bound = false;   // (ii)
    bool max_below_sqrt32 = false;     // (iii)
    int tree_values_checked = 0;
    int digit5_values_checked = 0;
    QuadSurd max_lambda4;
    Word max_witness;
    std::vector<std::string> failures;

    bool ok() const { return tree_values_present && digit5_above_bound && max_below_sqrt32; }
};

inline Lambda4Report lambda4_consistency(int max_period, std::uint64_t budget = default_word_budget) {
    require(max_period >= 1, errc::input, "max_period must be at least 1");
    Lambda4Report rep;
    SftSpec four = SftSpec::full(4), five = SftSpec::full(5);
    auto sample4 = spectrum_sample(four, CfPotential{}, max_period, budget);
    QuadSurd cap = QuadSurd(1, 1, 1, 21);

    rep.tree_values_present = true;
    for (const auto& e : markov_tree(1000000)) {
        if (e.value > cap || static_cast<int>(e.word.size()) > max_period) continue;
        ++rep.tree_values_checked;
        if (!sample4.contains(e.value)) {
            rep.tree_values_present = false;
            rep.failures.push_back("Markov value for m=" + e.m.str() + " missing from the Lambda_4 sample");
        }
    }

    QuadSurd bound = nj_lower_bound(5);
    rep.digit5_above_bound = true;
    for (const auto& e : cycle_values(five, CfPotential{}, max_period, budget)) {
        if (std::find(e.witness.begin(), e.witness.end(), 4) == e.witness.end()) continue;
        ++rep.digit5_values_checked;
        if (e.value < bound) {
            rep.digit5_above_bound = false;
            rep.failures.push_back("word " + five.format(e.witness) + " has value below 5 + 2 A_5");
        }
    }

    rep.max_lambda4 = sample4.entries.back().value;
    rep.max_witness = sample4.entries.back().witness;
    rep.max_below_sqrt32 = !(QuadSurd::sqrt_of(32) < rep.max_lambda4);
    if (!rep.max_below_sqrt32) rep.failures.push_back("Lambda_4 sample exceeds sqrt(32)");
    return rep;
}

// Largest value of f over the full shift on a digit set: M + 2 [0; overline{m, M}].
inline QuadSurd cf_max_value(const std::vector<int>& digits) {
    require(!digits.empty(), errc::input, "digit set is empty");
    int M = *std::max_element(digits.begin(), digits.end());
    return QuadSurd(M) + QuadSurd(2) * cantor_hull(digits).second;
}

// --- windowed cf mode --------------------------------------------------------------

enum class Inclusion { in, out, uncertain };

struct WindowedSublevel {
    int window = 0;
    Rational t;
    int in = 0, out = 0, uncertain = 0;
    FiniteTypeSet inner; // windows certainly <= t everywhere
    FiniteTypeSet outer; // windows possibly <= t

    // Certified: lower from the inner set, upper from the outer set.
    DimBounds dim() const {
        return {dim_sublevel(inner).lower, dim_sublevel(outer).upper, window, true};
    }
    DimBounds D() const { return {D_of_t(inner).lower, D_of_t(outer).upper, window, true}; }
};

namespace detail {

// Image of [lo, hi] under x -> [0; w_1, ..., w_n + ... ] i.e. h_w(x), outward.
inline Interval cf_image(const std::vector<int>& w, const Interval& tail) {
    double p = 0, pp = 1, q = 1, qq = 0;
    for (int a : w) {
        double np = a * p + pp, nq = a * q + qq;
        pp = p;
        qq = q;
        p = np;
        q = nq;
    }
    double x = (p + pp * tail.lo) / (q + qq * tail.lo), y = (p + pp * tail.hi) / (q + qq * tail.hi);
    return {round_down(round_down(std::min(x, y))), round_up(round_up(std::max(x, y)))};
}

struct WindowData {
    Interval f;       // enclosure of f over sequences with this window
    Interval fwd;     // enclosure of [0; a_1, a_2, ...]
    Interval bwd;     // enclosure of [0; a_{-1}, a_{-2}, ...]
    int a0 = 0;
};

inline WindowData window_data(const std::vector<int>& digits_window, int w, const Interval& hull) {
    WindowData d;
    d.a0 = digits_window[w];
    std::vector<int> fwd(digits_window.begin() + w + 1, digits_window.end());
    std::vector<int> bwd;
    for (int k = w - 1; k >= 0; --k) bwd.push_back(digits_window[k]);
    d.fwd = fwd.empty() ? hull : cf_image(fwd, hull);
    d.bwd = bwd.empty() ? hull : cf_image(bwd, hull);
    d.f = {round_down(d.a0 + d.fwd.lo + d.bwd.lo), round_up(d.a0 + d.fwd.hi + d.bwd.hi)};
    return d;
}

} // namespace detail

// Lambda_t for the cf potential on the full shift over `digits`, through
// windows (a_{-w}, ..., a_w).  Dimension weights are the Gauss-map
// contractions 1/(a_0 + y)^2 with y the forward (unstable) or backward
// (stable) tail over the window's cylinder.
inline WindowedSublevel windowed_cf_sublevel(const std::vector<int>& digits, int w, const Rational& t,
                                             std::uint64_t budget = default_word_budget) {
    require(w >= 0, errc::input, "window must be non-negative");
    std::vector<int> sorted = digits;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::string> labels;
    for (int a : sorted) labels.push_back(std::to_string(a));
    SftSpec base = SftSpec::full(static_cast<int>(sorted.size()), labels);
    auto [A, B] = cantor_hull(sorted);
    Interval hull{A.enclosure().first, B.enclosure().second};
    double tl = to_double(t);
    double t_lo = round_down(tl), t_hi = round_up(tl);

    WindowedSublevel out;
    out.window = w;
    out.t = t;
    WindowLift lift = window_lift(base, w, w, budget);
    std::vector<detail::WindowData> data;
    std::vector<Inclusion> cls;
    for (const auto& win : lift.windows) {
        std::vector<int> dw;
        for (int s : win) dw.push_back(sorted[s]);
        auto d = detail::window_data(dw, w, hull);
        Inclusion c = d.f.hi <= t_lo ? Inclusion::in : (d.f.lo > t_hi ? Inclusion::out : Inclusion::uncertain);
        (c == Inclusion::in ? out.in : c == Inclusion::out ? out.out : out.uncertain) += 1;
        data.push_back(d);
        cls.push_back(c);
    }
    auto build = [&](bool outer) {
        std::map<Word, int> index;
        for (std::size_t v = 0; v < lift.windows.size(); ++v) index[lift.windows[v]] = static_cast<int>(v);
        FiniteTypeSet fts = finite_type_set(
            base, w, w,
            [&](const Word& win) {
                Inclusion c = cls[index.at(win)];
                return c == Inclusion::in || (outer && c == Inclusion::uncertain);
            },
            budget);
        NodeRates nr;
        for (int v : fts.kept) {
            const auto& d = data[v];
            auto bracket = [&](const Interval& y) {
                double lo = 1.0 / ((d.a0 + y.hi) * (d.a0 + y.hi)), hi = 1.0 / ((d.a0 + y.lo) * (d.a0 + y.lo));
                return std::make_pair(round_down(lo), round_up(hi));
            };
            nr.unstable.push_back(bracket(d.fwd));
            nr.stable.push_back(bracket(d.bwd));
        }
        attach_dimensions(fts, nr);
        return fts;
    };
    out.inner = build(false);
    out.outer = build(true);
    return out;
}

struct WindowedBracket {
    int window = 0;
    bool separated = false; // certified: dim < 1 at t_below and dim > 1 at t_above
    Rational t_below, t_above;
    DimBounds at_below, at_above;
};

// Bisection on t for the crossing of 1 by the windowed dimension bounds.
inline WindowedBracket windowed_crossing(const std::vector<int>& digits, int w, Rational lo, Rational hi, int steps,
                                         std::uint64_t budget = default_word_budget) {
    WindowedBracket br;
    br.window = w;
    DimBounds dlo = windowed_cf_sublevel(digits, w, lo, budget).dim();
    DimBounds dhi = windowed_cf_sublevel(digits, w, hi, budget).dim();
    br.t_below = lo;
    br.t_above = hi;
    br.at_below = dlo;
    br.at_above = dhi;
    if (!(dlo.upper < 1.0 && dhi.lower > 1.0)) return br;
    br.separated = true;
    for (int k = 0; k < steps; ++k) {
        Rational mid = (br.t_below + br.t_above) / 2;
        DimBounds dm = windowed_cf_sublevel(digits, w, mid, budget).dim();
        if (dm.upper < 1.0) {
            br.t_below = mid;
            br.at_below = dm;
        } else if (dm.lower > 1.0) {
            br.t_above = mid;
            br.at_above = dm;
        } else {
            break; // uncertainty band reached
        }
    }
    return br;
}

} // namespace spectra_lab
