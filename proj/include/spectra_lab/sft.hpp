#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "spectra_lab/error.hpp"

namespace spectra_lab {

// Symbols are 0-based internally; labels carry the user-facing names.
using Word = std::vector<int>;

inline constexpr std::uint64_t default_word_budget = 100'000'000;

class SftSpec {
public:
    SftSpec() = default;

    SftSpec(int r, const std::vector<std::vector<int>>& b, std::vector<std::string> labels = {},
            bool degenerate = false)
        : r_(r), labels_(std::move(labels)), degenerate_(degenerate) {
        require(r >= 0, errc::input, "alphabet size must be non-negative");
        require(r > 0 || degenerate, errc::input, "empty alphabet");
        require(static_cast<int>(b.size()) == r, errc::input, "transition matrix must be r x r");
        b_.assign(static_cast<std::size_t>(r) * r, 0);
        for (int i = 0; i < r; ++i) {
            require(static_cast<int>(b[i].size()) == r, errc::input, "transition matrix must be r x r");
            for (int j = 0; j < r; ++j) {
                require(b[i][j] == 0 || b[i][j] == 1, errc::input, "transition entries must be 0 or 1");
                b_[static_cast<std::size_t>(i) * r + j] = static_cast<std::uint8_t>(b[i][j]);
            }
        }
        if (labels_.empty()) {
            for (int i = 0; i < r; ++i) labels_.push_back(std::to_string(i + 1));
        }
        require(static_cast<int>(labels_.size()) == r, errc::input, "need one label per symbol");
        build_adjacency();
        if (!degenerate_) {
            for (int i = 0; i < r; ++i) {
                require(!succ_[i].empty(), errc::input, "symbol " + labels_[i] + " has no successor");
                require(!pred_[i].empty(), errc::input, "symbol " + labels_[i] + " has no predecessor");
            }
        }
    }

    static SftSpec full(int r, std::vector<std::string> labels = {}) {
        require(r >= 1, errc::input, "full shift needs at least one symbol");
        return SftSpec(r, std::vector<std::vector<int>>(r, std::vector<int>(r, 1)), std::move(labels));
    }

    int size() const noexcept { return r_; }
    bool allowed(int i, int j) const { return b_[static_cast<std::size_t>(i) * r_ + j] != 0; }
    const std::vector<int>& successors(int i) const { return succ_[i]; }
    const std::vector<int>& predecessors(int i) const { return pred_[i]; }
    const std::string& label(int i) const { return labels_[i]; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    bool degenerate() const noexcept { return degenerate_; }

    std::vector<std::vector<int>> matrix() const {
        std::vector<std::vector<int>> m(r_, std::vector<int>(r_, 0));
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < r_; ++j) m[i][j] = allowed(i, j) ? 1 : 0;
        return m;
    }

    std::size_t edge_count() const {
        return static_cast<std::size_t>(std::count(b_.begin(), b_.end(), std::uint8_t{1}));
    }

    bool valid_symbol(int s) const noexcept { return s >= 0 && s < r_; }

    bool is_admissible(const Word& w) const {
        for (std::size_t k = 0; k < w.size(); ++k) {
            if (!valid_symbol(w[k])) return false;
            if (k + 1 < w.size() && (!valid_symbol(w[k + 1]) || !allowed(w[k], w[k + 1]))) return false;
        }
        return true;
    }

    // Admissible as a periodic orbit: also closes up from last to first.
    bool is_cycle(const Word& w) const {
        return !w.empty() && is_admissible(w) && allowed(w.back(), w.front());
    }

    bool single_char_labels() const {
        return std::all_of(labels_.begin(), labels_.end(), [](const std::string& s) { return s.size() == 1; });
    }

    // Labels concatenated, or comma-joined when some label is longer than one character.
    std::string format(const Word& w) const {
        std::string out;
        bool plain = single_char_labels();
        for (std::size_t k = 0; k < w.size(); ++k) {
            if (!plain && k > 0) out += ',';
            out += valid_symbol(w[k]) ? labels_[w[k]] : "?";
        }
        return out;
    }

    // Inverse of format(); accepts either the concatenated or the comma form.
    Word parse(const std::string& text) const {
        Word w;
        if (text.find(',') != std::string::npos || !single_char_labels()) {
            std::size_t start = 0;
            while (start <= text.size()) {
                std::size_t end = text.find(',', start);
                if (end == std::string::npos) end = text.size();
                w.push_back(symbol_of(text.substr(start, end - start)));
                start = end + 1;
            }
        } else {
            for (char ch : text) w.push_back(symbol_of(std::string(1, ch)));
        }
        return w;
    }

    int symbol_of(const std::string& label) const {
        for (int i = 0; i < r_; ++i)
            if (labels_[i] == label) return i;
        fail(errc::input, "unknown symbol label '" + label + "'");
    }

    // Sub-shift on the kept symbols (in the given order), labels preserved.
    SftSpec induced(const std::vector<int>& keep) const {
        int n = static_cast<int>(keep.size());
        std::vector<std::vector<int>> b(n, std::vector<int>(n, 0));
        std::vector<std::string> labels;
        bool degenerate = n == 0;
        for (int a = 0; a < n; ++a) {
            labels.push_back(labels_[keep[a]]);
            for (int c = 0; c < n; ++c) b[a][c] = allowed(keep[a], keep[c]) ? 1 : 0;
        }
        for (int a = 0; a < n && !degenerate; ++a) {
            bool row = std::any_of(b[a].begin(), b[a].end(), [](int v) { return v != 0; });
            bool col = false;
            for (int c = 0; c < n; ++c) col = col || b[c][a] != 0;
            degenerate = !row || !col;
        }
        return SftSpec(n, b, std::move(labels), degenerate);
    }

    friend bool operator==(const SftSpec& a, const SftSpec& b) {
        return a.r_ == b.r_ && a.b_ == b.b_ && a.labels_ == b.labels_ && a.degenerate_ == b.degenerate_;
    }

private:
    void build_adjacency() {
        succ_.assign(r_, {});
        pred_.assign(r_, {});
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < r_; ++j)
                if (allowed(i, j)) {
                    succ_[i].push_back(j);
                    pred_[j].push_back(i);
                }
    }

    int r_ = 0;
    std::vector<std::uint8_t> b_;
    std::vector<std::vector<int>> succ_, pred_;
    std::vector<std::string> labels_;
    bool degenerate_ = false;
};

// Number of admissible words of length n, saturating at UINT64_MAX.
inline std::uint64_t count_words(const SftSpec& spec, int n) {
    require(n >= 1, errc::input, "word length must be at least 1");
    constexpr auto top = std::numeric_limits<std::uint64_t>::max();
    std::vector<std::uint64_t> ending(spec.size(), 1), next(spec.size());
    for (int step = 1; step < n; ++step) {
        std::fill(next.begin(), next.end(), 0);
        for (int i = 0; i < spec.size(); ++i)
            for (int j : spec.successors(i)) next[j] = next[j] > top - ending[i] ? top : next[j] + ending[i];
        ending.swap(next);
    }
    std::uint64_t total = 0;
    for (auto v : ending) total = total > top - v ? top : total + v;
    return total;
}

inline void check_budget(std::uint64_t needed, std::uint64_t budget, const std::string& what) {
    if (needed > budget)
        fail(errc::capacity, what + " needs " + std::to_string(needed) + " items, budget is " + std::to_string(budget));
}

// Calls visit(word) for each admissible word of length n, in lexicographic order.
template <class Visit>
void for_each_word(const SftSpec& spec, int n, Visit&& visit) {
    if (n < 1 || spec.size() == 0) return;
    Word w(n);
    std::vector<std::size_t> pos(n, 0);
    for (int first = 0; first < spec.size(); ++first) {
        w[0] = first;
        int depth = 1;
        if (n == 1) {
            visit(static_cast<const Word&>(w));
            continue;
        }
        pos[1] = 0;
        while (depth > 0) {
            const auto& succ = spec.successors(w[depth - 1]);
            if (pos[depth] == succ.size()) {
                --depth;
                if (depth > 0) ++pos[depth];
                continue;
            }
            w[depth] = succ[pos[depth]];
            if (depth + 1 == n) {
                visit(static_cast<const Word&>(w));
                ++pos[depth];
            } else {
                ++depth;
                pos[depth] = 0;
            }
        }
    }
}

inline std::vector<Word> admissible_words(const SftSpec& spec, int n, std::uint64_t budget = default_word_budget) {
    require(n >= 1, errc::input, "word length must be at least 1");
    check_budget(count_words(spec, n), budget, "admissible words of length " + std::to_string(n));
    std::vector<Word> out;
    for_each_word(spec, n, [&](const Word& w) { out.push_back(w); });
    return out;
}

inline Word concat(const Word& w1, const Word& w2, const SftSpec& spec) {
    require(spec.is_admissible(w1), errc::input, "left word '" + spec.format(w1) + "' is not admissible");
    require(spec.is_admissible(w2), errc::input, "right word '" + spec.format(w2) + "' is not admissible");
    if (!w1.empty() && !w2.empty() && !spec.allowed(w1.back(), w2.front()))
        fail(errc::junction_forbidden, "forbidden junction " + spec.label(w1.back()) + " -> " + spec.label(w2.front()));
    Word out = w1;
    out.insert(out.end(), w2.begin(), w2.end());
    return out;
}

enum class ComponentKind { subhorseshoe, trivial_periodic, transient_state };

inline const char* kind_name(ComponentKind k) {
    switch (k) {
    case ComponentKind::subhorseshoe: return "subhorseshoe";
    case ComponentKind::trivial_periodic: return "trivial_periodic";
    case ComponentKind::transient_state: return "transient_state";
    }
    return "unknown";
}

struct Component {
    std::vector<int> members; // sorted
    ComponentKind kind = ComponentKind::transient_state;
    bool recurrent() const noexcept { return kind != ComponentKind::transient_state; }
};

struct Decomposition {
    // Topological order: every edge between components goes from a lower to a
    // higher index, so the permuted matrix is block upper triangular.
    std::vector<Component> components;
    std::vector<int> component_of;
    std::vector<std::vector<bool>> edge;    // direct edge between distinct components
    std::vector<std::vector<bool>> reaches; // strict transitive closure of edge
    std::vector<int> ordering;              // symbols listed component by component

    bool reachable(int from, int to) const { return reaches[from][to]; }
};

namespace detail {

// Iterative Tarjan; returns component id per vertex (ids in reverse topological order).
inline std::vector<int> tarjan_scc(int n, const std::vector<std::vector<int>>& succ, int& count) {
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
    std::vector<bool> on_stack(n, false);
    std::vector<std::pair<int, std::size_t>> call;
    int next_index = 0;
    count = 0;
    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        call.push_back({root, 0});
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& [v, k] = call.back();
            if (k < succ[v].size()) {
                int w = succ[v][k++];
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                for (;;) {
                    int w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = count;
                    if (w == v) break;
                }
                ++count;
            }
            int done = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
        }
    }
    return comp;
}

} // namespace detail

inline Decomposition irreducible_components(const SftSpec& spec) {
    int n = spec.size();
    std::vector<std::vector<int>> succ(n);
    for (int i = 0; i < n; ++i) succ[i] = spec.successors(i);
    int count = 0;
    auto raw = detail::tarjan_scc(n, succ, count);

    std::vector<std::vector<int>> members(count);
    for (int v = 0; v < n; ++v) members[raw[v]].push_back(v);

    // Kahn's algorithm, always releasing the ready component with the smallest
    // member, so the order is canonical.
    std::vector<std::vector<bool>> raw_edge(count, std::vector<bool>(count, false));
    std::vector<int> indeg(count, 0);
    for (int v = 0; v < n; ++v)
        for (int w : succ[v])
            if (raw[v] != raw[w] && !raw_edge[raw[v]][raw[w]]) {
                raw_edge[raw[v]][raw[w]] = true;
                ++indeg[raw[w]];
            }
    std::map<int, int> ready; // smallest member -> raw id
    for (int c = 0; c < count; ++c)
        if (indeg[c] == 0) ready[members[c].front()] = c;
    std::vector<int> order;
    while (!ready.empty()) {
        int c = ready.begin()->second;
        ready.erase(ready.begin());
        order.push_back(c);
        for (int d = 0; d < count; ++d)
            if (raw_edge[c][d] && --indeg[d] == 0) ready[members[d].front()] = d;
    }

    Decomposition dec;
    std::vector<int> final_id(count);
    for (int k = 0; k < count; ++k) final_id[order[k]] = k;
    dec.component_of.resize(n);
    for (int v = 0; v < n; ++v) dec.component_of[v] = final_id[raw[v]];
    for (int k = 0; k < count; ++k) {
        Component comp;
        comp.members = members[order[k]];
        if (comp.members.size() == 1) {
            int v = comp.members.front();
            comp.kind = spec.allowed(v, v) ? ComponentKind::trivial_periodic : ComponentKind::transient_state;
        } else {
            // Strongly connected with exactly one internal successor each: a single cycle.
            bool cycle = std::all_of(comp.members.begin(), comp.members.end(), [&](int v) {
                return std::count_if(succ[v].begin(), succ[v].end(),
                                     [&](int w) { return dec.component_of[w] == k; }) == 1;
            });
            comp.kind = cycle ? ComponentKind::trivial_periodic : ComponentKind::subhorseshoe;
        }
        dec.components.push_back(std::move(comp));
        for (int v : dec.components.back().members) dec.ordering.push_back(v);
    }
    dec.edge.assign(count, std::vector<bool>(count, false));
    for (int v = 0; v < n; ++v)
        for (int w : succ[v])
            if (dec.component_of[v] != dec.component_of[w]) dec.edge[dec.component_of[v]][dec.component_of[w]] = true;
    // Closure in reverse topological order.
    dec.reaches.assign(count, std::vector<bool>(count, false));
    for (int c = count - 1; c >= 0; --c)
        for (int d = c + 1; d < count; ++d)
            if (dec.edge[c][d]) {
                dec.reaches[c][d] = true;
                for (int e = d + 1; e < count; ++e)
                    if (dec.reaches[d][e]) dec.reaches[c][e] = true;
            }
    return dec;
}

// Ordered pairs (i, j) of recurrent components with j reachable from i.
inline std::vector<std::pair<int, int>> transient_pairs(const Decomposition& dec) {
    std::vector<std::pair<int, int>> out;
    int count = static_cast<int>(dec.components.size());
    for (int i = 0; i < count; ++i)
        for (int j = 0; j < count; ++j)
            if (i != j && dec.components[i].recurrent() && dec.components[j].recurrent() && dec.reaches[i][j])
                out.push_back({i, j});
    return out;
}

// Higher block presentation: nodes are admissible windows
// (x_{-past}, ..., x_{future}); the decoding map reads the symbol at `past`.
struct WindowLift {
    SftSpec spec;
    std::vector<Word> windows;
    int past = 0;
    int future = 0;

    int center(int node) const { return windows[node][past]; }

    Word decode(const Word& nodes) const {
        Word out;
        out.reserve(nodes.size());
        for (int v : nodes) out.push_back(center(v));
        return out;
    }

    int node_of(const Word& window) const {
        auto it = std::lower_bound(windows.begin(), windows.end(), window);
        require(it != windows.end() && *it == window, errc::input, "window is not admissible");
        return static_cast<int>(it - windows.begin());
    }

    // Periodic base orbit -> lifted periodic orbit of the same period.
    Word encode_cycle(const Word& cycle) const {
        int len = past + future + 1;
        int p = static_cast<int>(cycle.size());
        Word out;
        for (int i = 0; i < p; ++i) {
            Word window(len);
            for (int k = 0; k < len; ++k) window[k] = cycle[((i - past + k) % p + p) % p];
            out.push_back(node_of(window));
        }
        return out;
    }
};

inline WindowLift window_lift(const SftSpec& spec, int past, int future, std::uint64_t budget = default_word_budget) {
    require(past >= 0 && future >= 0, errc::input, "window offsets must be non-negative");
    int len = past + future + 1;
    WindowLift lift;
    lift.past = past;
    lift.future = future;
    lift.windows = admissible_words(spec, len, budget);
    int n = static_cast<int>(lift.windows.size());
    std::vector<std::vector<int>> b(n, std::vector<int>(n, 0));
    if (len == 1) {
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v) b[u][v] = spec.allowed(lift.windows[u][0], lift.windows[v][0]) ? 1 : 0;
    } else {
        std::map<Word, std::vector<int>> by_prefix;
        for (int v = 0; v < n; ++v) by_prefix[Word(lift.windows[v].begin(), lift.windows[v].end() - 1)].push_back(v);
        for (int u = 0; u < n; ++u) {
            auto it = by_prefix.find(Word(lift.windows[u].begin() + 1, lift.windows[u].end()));
            if (it == by_prefix.end()) continue;
            for (int v : it->second) b[u][v] = 1;
        }
    }
    std::vector<std::string> labels;
    for (const auto& w : lift.windows) labels.push_back(spec.format(w));
    bool degenerate = spec.degenerate();
    lift.spec = SftSpec(n, b, std::move(labels), degenerate);
    return lift;
}

// True when w is strictly smaller than each of its proper rotations.
inline bool is_lyndon(const Word& w) {
    std::size_t n = w.size();
    auto rotation_compare = [&](std::size_t shift) {
        for (std::size_t k = 0; k < n; ++k) {
            int a = w[(shift + k) % n], b = w[k];
            if (a != b) return a < b ? -1 : 1;
        }
        return 0;
    };
    for (std::size_t shift = 1; shift < n; ++shift)
        if (rotation_compare(shift) <= 0) return false;
    return n > 0;
}

// Least rotation (Booth-free quadratic version; words here are short).
inline Word canonical_rotation(const Word& w) {
    Word best = w;
    for (std::size_t s = 1; s < w.size(); ++s) {
        Word rot(w.begin() + s, w.end());
        rot.insert(rot.end(), w.begin(), w.begin() + s);
        if (rot < best) best = rot;
    }
    return best;
}

// Primitive root of a periodic word: the shortest u with w = u^k.
inline Word primitive_root(const Word& w) {
    std::size_t n = w.size();
    for (std::size_t p = 1; p <= n; ++p) {
        if (n % p != 0) continue;
        bool ok = true;
        for (std::size_t k = p; k < n && ok; ++k) ok = w[k] == w[k - p];
        if (ok) return Word(w.begin(), w.begin() + p);
    }
    return w;
}

// Primitive periodic orbits of period <= max_period, one per orbit, each given
// by its least rotation; ordered by (period, lexicographic).
inline std::vector<Word> primitive_cycles(const SftSpec& spec, int max_period, std::uint64_t budget = default_word_budget) {
    require(max_period >= 1, errc::input, "max_period must be at least 1");
    std::vector<std::vector<Word>> by_length(max_period + 1);
    std::uint64_t visited = 0;
    Word path;
    std::vector<std::size_t> pos;
    for (int s = 0; s < spec.size(); ++s) {
        // The least rotation starts with its smallest symbol, so only symbols >= s
        // may follow.
        path.assign(1, s);
        pos.assign(1, 0);
        for (;;) {
            int len = static_cast<int>(path.size());
            if (pos.back() == 0) {
                if (++visited > budget) check_budget(visited, budget, "periodic orbit search");
                if (spec.allowed(path.back(), s) && is_lyndon(path)) by_length[len].push_back(path);
            }
            const auto& succ = spec.successors(path.back());
            std::size_t& k = pos.back();
            while (k < succ.size() && succ[k] < s) ++k;
            if (len < max_period && k < succ.size()) {
                int next = succ[k++];
                path.push_back(next);
                pos.push_back(0);
                continue;
            }
            path.pop_back();
            pos.pop_back();
            if (path.empty()) break;
        }
    }
    std::vector<Word> out;
    for (auto& group : by_length) {
        std::sort(group.begin(), group.end());
        out.insert(out.end(), group.begin(), group.end());
    }
    return out;
}

// Iteratively removes nodes outside `keep` and nodes with no kept successor or
// predecessor; what remains are the symbols on bi-infinite paths.
inline std::vector<int> recurrent_core(const SftSpec& spec, std::vector<bool> keep) {
    int n = spec.size();
    std::vector<int> out_deg(n, 0), in_deg(n, 0);
    for (int v = 0; v < n; ++v) {
        if (!keep[v]) continue;
        for (int w : spec.successors(v))
            if (keep[w]) {
                ++out_deg[v];
                ++in_deg[w];
            }
    }
    std::vector<int> queue;
    for (int v = 0; v < n; ++v)
        if (keep[v] && (out_deg[v] == 0 || in_deg[v] == 0)) queue.push_back(v);
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        if (!keep[v]) continue;
        keep[v] = false;
        for (int w : spec.successors(v))
            if (keep[w] && --in_deg[w] == 0) queue.push_back(w);
        for (int u : spec.predecessors(v))
            if (keep[u] && --out_deg[u] == 0) queue.push_back(u);
    }
    std::vector<int> kept;
    for (int v = 0; v < n; ++v)
        if (keep[v]) kept.push_back(v);
    return kept;
}

} // namespace spectra_lab
