#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "spectra_lab/dimension.hpp"
#include "spectra_lab/error.hpp"
#include "spectra_lab/gauss.hpp"
#include "spectra_lab/parallel.hpp"
#include "spectra_lab/quad_surd.hpp"
#include "spectra_lab/rational.hpp"
#include "spectra_lab/sft.hpp"

namespace spectra_lab {

// How the expanding map acts on each interval.
//   affine: psi is affine on I_j, onto the hull of the intervals it covers.
//   gauss:  psi(x) = 1/x - a on the cylinder of digit a (full shift on digits).
//   bounds: only derivative bounds are known; enough for dimension bounds.
enum class BranchModel { affine, gauss, bounds };

struct DerivBounds {
    double min = 1.0, max = 1.0; // bounds for |psi'| on the interval
};

struct Interval {
    double lo = 0.0, hi = 0.0;
    double length() const noexcept { return hi - lo; }
};

class CantorSpec {
public:
    CantorSpec() = default;

    static CantorSpec affine(std::vector<RationalInterval> intervals, SftSpec comb, std::vector<int> orientation = {}) {
        CantorSpec c;
        c.model_ = BranchModel::affine;
        c.intervals_ = std::move(intervals);
        c.comb_ = std::move(comb);
        c.orientation_ = orientation.empty() ? std::vector<int>(c.intervals_.size(), 1) : std::move(orientation);
        c.validate_layout();
        for (int j = 0; j < c.size(); ++j) {
            require(c.orientation_[j] == 1 || c.orientation_[j] == -1, errc::input, "orientation must be +1 or -1");
            Rational expansion = c.affine_expansion(j);
            require(expansion > 1, errc::input, "branch " + std::to_string(j + 1) + " is not expanding");
            double e = to_double(expansion);
            c.bounds_.push_back({round_down(e), round_up(e)});
        }
        return c;
    }

    static CantorSpec bounded(std::vector<RationalInterval> intervals, SftSpec comb, std::vector<DerivBounds> bounds) {
        CantorSpec c;
        c.model_ = BranchModel::bounds;
        c.intervals_ = std::move(intervals);
        c.comb_ = std::move(comb);
        c.orientation_.assign(c.intervals_.size(), 1);
        c.bounds_ = std::move(bounds);
        c.validate_layout();
        require(c.bounds_.size() == c.intervals_.size(), errc::input, "need one derivative bound per interval");
        for (auto& b : c.bounds_)
            require(b.min > 1.0 && b.min <= b.max && std::isfinite(b.max), errc::input, "branch bounds need 1 < min <= max");
        return c;
    }

    // Intervals are the full cylinders [1/(a+1), 1/a], listed in digit order.
    static CantorSpec gauss(std::vector<int> digits) {
        require(!digits.empty(), errc::input, "digit set is empty");
        std::sort(digits.begin(), digits.end());
        require(std::adjacent_find(digits.begin(), digits.end()) == digits.end(), errc::input, "repeated digit");
        check_digits(digits, "digit set");
        CantorSpec c;
        c.model_ = BranchModel::gauss;
        c.digits_ = digits;
        int r = static_cast<int>(digits.size());
        c.comb_ = SftSpec::full(r, digit_labels(digits));
        auto [A, B] = cantor_hull(digits);
        c.hull_lo_ = A.enclosure().first;
        c.hull_hi_ = B.enclosure().second;
        for (int a : digits) {
            c.intervals_.push_back({Rational(1, a + 1), Rational(1, a)});
            c.orientation_.push_back(-1);
            // |psi'(x)| = 1/x^2 with x = 1/(a+t), t in [A, B]
            double lo = (a + c.hull_lo_) * (a + c.hull_lo_), hi = (a + c.hull_hi_) * (a + c.hull_hi_);
            c.bounds_.push_back({round_down(lo), round_up(hi)});
        }
        return c;
    }

    int size() const noexcept { return static_cast<int>(intervals_.size()); }
    BranchModel model() const noexcept { return model_; }
    bool is_affine() const noexcept { return model_ == BranchModel::affine; }
    bool is_gauss() const noexcept { return model_ == BranchModel::gauss; }
    bool has_geometry() const noexcept { return model_ != BranchModel::bounds; }
    const std::vector<RationalInterval>& intervals() const noexcept { return intervals_; }
    const SftSpec& combinatorics() const noexcept { return comb_; }
    const std::vector<DerivBounds>& branch_bounds() const noexcept { return bounds_; }
    const std::vector<int>& orientation() const noexcept { return orientation_; }
    const std::vector<int>& digits() const noexcept { return digits_; }

    // Indices [first, last] of the intervals covered by psi(I_j).
    std::pair<int, int> image_range(int j) const {
        const auto& s = comb_.successors(j);
        return {s.front(), s.back()};
    }
    int degree(int j) const { return static_cast<int>(comb_.successors(j).size()); }

    RationalInterval image_hull(int j) const {
        auto [a, b] = image_range(j);
        return {intervals_[a].lo, intervals_[b].hi};
    }

    // |psi(I_j)| / |I_j| for affine branches.
    Rational affine_expansion(int j) const {
        auto h = image_hull(j);
        return (h.hi - h.lo) / (intervals_[j].hi - intervals_[j].lo);
    }

    // Convex hull of the Cantor set of a Gauss spec.
    Interval gauss_hull() const { return {hull_lo_, hull_hi_}; }

    friend bool operator==(const CantorSpec& a, const CantorSpec& b) {
        return a.model_ == b.model_ && a.intervals_ == b.intervals_ && a.comb_ == b.comb_ &&
               a.orientation_ == b.orientation_ && a.digits_ == b.digits_ &&
               (a.model_ != BranchModel::bounds || a.bounds_.size() == b.bounds_.size());
    }

private:
    static std::vector<std::string> digit_labels(const std::vector<int>& digits) {
        std::vector<std::string> out;
        for (int a : digits) out.push_back(std::to_string(a));
        return out;
    }

    void validate_layout() {
        int r = size();
        require(r >= 1, errc::input, "Cantor spec needs at least one interval");
        require(comb_.size() == r, errc::input, "transition matrix size does not match interval count");
        require(static_cast<int>(orientation_.size()) == r, errc::input, "need one orientation per interval");
        for (int j = 0; j < r; ++j) {
            require(intervals_[j].lo < intervals_[j].hi, errc::input, "interval " + std::to_string(j + 1) + " is empty");
            if (j + 1 < r)
                require(intervals_[j].hi <= intervals_[j + 1].lo, errc::input, "intervals must be disjoint and ordered left to right");
            const auto& s = comb_.successors(j);
            require(!s.empty(), errc::input, "interval " + std::to_string(j + 1) + " maps onto nothing");
            require(s.back() - s.front() + 1 == static_cast<int>(s.size()), errc::input,
                    "row " + std::to_string(j + 1) + " is not a contiguous run of intervals");
        }
    }

    BranchModel model_ = BranchModel::affine;
    std::vector<RationalInterval> intervals_;
    SftSpec comb_;
    std::vector<int> orientation_;
    std::vector<DerivBounds> bounds_;
    std::vector<int> digits_;
    double hull_lo_ = 0.0, hull_hi_ = 0.0;
};

inline CantorSpec gauss_cantor(const std::vector<int>& digits) { return CantorSpec::gauss(digits); }

// Full-shift affine spec with the given contraction rates; intervals sit in
// [0,1] left to right with equal gaps.  Rates must sum to at most 1.
inline CantorSpec affine_from_rates(const std::vector<Rational>& rates) {
    require(!rates.empty(), errc::input, "rate list is empty");
    Rational total = 0;
    for (const auto& r : rates) {
        require(r > 0 && r < 1, errc::input, "contraction rates must lie in (0,1)");
        total += r;
    }
    require(total <= 1, errc::input, "rates sum to more than 1; no disjoint realisation in [0,1]");
    int k = static_cast<int>(rates.size());
    require(k >= 2, errc::input, "an affine Cantor set needs at least two branches");
    Rational gap = (1 - total) / (k - 1);
    std::vector<RationalInterval> iv;
    Rational x = 0;
    for (int j = 0; j < k; ++j) {
        iv.push_back({x, x + rates[j]});
        x += rates[j] + gap;
    }
    return CantorSpec::affine(iv, SftSpec::full(k));
}

inline CantorSpec middle_thirds() { return affine_from_rates({Rational(1, 3), Rational(1, 3)}); }

namespace detail {

// Affine map x -> s x + t.
template <class T>
struct Affine {
    T s{1}, t{0};
    T operator()(const T& x) const { return s * x + t; }
    Affine then_inner(const Affine& g) const { return {s * g.s, s * g.t + t}; } // this o g
};

// Inverse branch of psi on I_j, mapping the image hull onto I_j.
inline Affine<Rational> inverse_branch(const CantorSpec& c, int j) {
    const auto& I = c.intervals()[j];
    auto H = c.image_hull(j);
    Rational k = (I.hi - I.lo) / (H.hi - H.lo);
    if (c.orientation()[j] > 0) return {k, Rational(I.lo - k * H.lo)};
    return {Rational(-k), Rational(I.hi + k * H.lo)};
}

inline Affine<double> to_double_map(const Affine<Rational>& m) { return {to_double(m.s), to_double(m.t)}; }

} // namespace detail

// Exact depth-|w| cylinder of an affine spec: h_{w1} o ... o h_{w(n-1)} (I_{wn}).
inline RationalInterval affine_cylinder(const CantorSpec& c, const Word& w) {
    require(c.is_affine(), errc::precondition, "exact cylinders need an affine spec");
    require(!w.empty() && c.combinatorics().is_admissible(w), errc::input, "word is not admissible");
    detail::Affine<Rational> g;
    for (std::size_t k = 0; k + 1 < w.size(); ++k) g = g.then_inner(detail::inverse_branch(c, w[k]));
    const auto& I = c.intervals()[w.back()];
    Rational a = g(I.lo), b = g(I.hi);
    if (b < a) std::swap(a, b);
    return {a, b};
}

namespace detail {

inline void check_geometry(const CantorSpec& c, const char* what) {
    require(c.has_geometry(), errc::precondition, std::string(what) + " needs an affine or Gauss spec");
}

} // namespace detail

// Convex hulls of K within each depth-n cylinder, sorted left to right.
inline std::vector<Interval> cylinder_hulls(const CantorSpec& c, int n, std::uint64_t budget = default_word_budget) {
    detail::check_geometry(c, "cylinder enumeration");
    require(n >= 1, errc::input, "depth must be at least 1");
    const SftSpec& sft = c.combinatorics();
    check_budget(count_words(sft, n), budget, "cylinders at depth " + std::to_string(n));
    std::vector<Interval> out;
    if (c.is_affine()) {
        std::vector<detail::Affine<double>> inv;
        for (int j = 0; j < c.size(); ++j) inv.push_back(detail::to_double_map(detail::inverse_branch(c, j)));
        std::vector<double> lo, hi;
        for (auto& I : c.intervals()) {
            lo.push_back(to_double(I.lo));
            hi.push_back(to_double(I.hi));
        }
        for_each_word(sft, n, [&](const Word& w) {
            detail::Affine<double> g;
            for (int k = 0; k + 1 < n; ++k) g = g.then_inner(inv[w[k]]);
            double a = g(lo[w.back()]), b = g(hi[w.back()]);
            out.push_back({std::min(a, b), std::max(a, b)});
        });
    } else {
        Interval tail = c.gauss_hull();
        for_each_word(sft, n, [&](const Word& w) {
            double p = 0, pp = 1, q = 1, qq = 0;
            for (int s : w) {
                double a = c.digits()[s];
                double np = a * p + pp, nq = a * q + qq;
                pp = p;
                qq = q;
                p = np;
                q = nq;
            }
            double x = (p + pp * tail.lo) / (q + qq * tail.lo), y = (p + pp * tail.hi) / (q + qq * tail.hi);
            out.push_back({std::min(x, y), std::max(x, y)});
        });
    }
    std::sort(out.begin(), out.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    return out;
}

// Union of depth-n hulls with touching pieces merged.
inline std::vector<Interval> cylinder_cover(const CantorSpec& c, int n, std::uint64_t budget = default_word_budget,
                                            double merge_tol = 1e-12) {
    auto hulls = cylinder_hulls(c, n, budget);
    std::vector<Interval> out;
    for (const auto& h : hulls) {
        if (!out.empty() && h.lo <= out.back().hi + merge_tol) out.back().hi = std::max(out.back().hi, h.hi);
        else out.push_back(h);
    }
    return out;
}

// Every piece of `inner` lies inside some piece of `outer`.
inline bool cover_within(const std::vector<Interval>& inner, const std::vector<Interval>& outer, double tol = 1e-12) {
    std::size_t k = 0;
    for (const auto& piece : inner) {
        while (k < outer.size() && outer[k].hi + tol < piece.lo) ++k;
        if (k == outer.size() || outer[k].lo - tol > piece.lo || outer[k].hi + tol < piece.hi) return false;
    }
    return true;
}

namespace detail {

inline double log_widen_down(double x) { return x - 4e-16 * (1.0 + std::fabs(x)); }
inline double log_widen_up(double x) { return x + 4e-16 * (1.0 + std::fabs(x)); }

// Gauss spec at depth n: pieces are the Cantor subsets of the s-cylinders
// (s = ceil(n/2)); piece u contains h_u(piece v) for every v, and the
// contraction of h_u is bracketed by letting the tail range over the hull of
// the (n-s)-cylinder that starts v.
inline WeightedGraph gauss_block_graph(const CantorSpec& c, int n, std::uint64_t budget) {
    int s = (n + 1) / 2, t = n - s;
    std::uint64_t states = count_words(c.combinatorics(), s);
    std::uint64_t edges = states > std::numeric_limits<std::uint64_t>::max() / states ? std::numeric_limits<std::uint64_t>::max()
                                                                                   : states * states;
    check_budget(edges, budget, "block transfer matrix at depth " + std::to_string(n));
    auto words = admissible_words(c.combinatorics(), s);
    Interval hull = c.gauss_hull();

    // Tail hull for each state: hull of the (n-s)-prefix cylinder of v.
    std::vector<Interval> tail(words.size());
    for (std::size_t v = 0; v < words.size(); ++v) {
        if (t == 0) {
            tail[v] = hull;
            continue;
        }
        double p = 0, pp = 1, q = 1, qq = 0;
        for (int k = 0; k < t; ++k) {
            double a = c.digits()[words[v][k]];
            double np = a * p + pp, nq = a * q + qq;
            pp = p;
            qq = q;
            p = np;
            q = nq;
        }
        double x = (p + pp * hull.lo) / (q + qq * hull.lo), y = (p + pp * hull.hi) / (q + qq * hull.hi);
        tail[v] = {round_down(std::min(x, y)), round_up(std::max(x, y))};
    }
    WeightedGraph g;
    g.n = static_cast<int>(words.size());
    std::vector<std::pair<double, double>> qs(words.size());
    for (std::size_t u = 0; u < words.size(); ++u) {
        double q = 1, qq = 0;
        for (int sym : words[u]) {
            double nq = c.digits()[sym] * q + qq;
            qq = q;
            q = nq;
        }
        require(q < 4.5e15, errc::capacity, "continuants exceed exact double range");
        qs[u] = {q, qq};
    }
    for (std::size_t u = 0; u < words.size(); ++u) {
        auto [q, qq] = qs[u];
        for (std::size_t v = 0; v < words.size(); ++v) {
            // |h_u'(x)| = 1/(q + qq x)^2, decreasing in x
            double lmin = -2.0 * std::log(q + qq * tail[v].hi);
            double lmax = -2.0 * std::log(q + qq * tail[v].lo);
            g.add(static_cast<int>(u), static_cast<int>(v), log_widen_down(lmin), log_widen_up(lmax));
        }
    }
    return g;
}

// Affine and bounds specs: one step per symbol already gives the exact
// (affine) or best available (bounds) bracket.
inline WeightedGraph symbol_graph(const CantorSpec& c) {
    WeightedGraph g;
    g.n = c.size();
    for (int i = 0; i < c.size(); ++i)
        for (int j : c.combinatorics().successors(i)) {
            const auto& b = c.branch_bounds()[i];
            g.add(i, j, log_widen_down(-std::log(b.max)), log_widen_up(-std::log(b.min)));
        }
    return g;
}

} // namespace detail

// Certified Hausdorff dimension bracket from depth-n cylinder data.
inline DimBounds beta_n_bounds(const CantorSpec& c, int n, std::uint64_t budget = default_word_budget) {
    require(n >= 1, errc::input, "depth must be at least 1");
    check_budget(count_words(c.combinatorics(), n), budget, "cylinders at depth " + std::to_string(n));
    WeightedGraph g = c.is_gauss() ? detail::gauss_block_graph(c, n, budget) : detail::symbol_graph(c);
    DimBounds out = transfer_root(g, beta_tolerance);
    out.depth = n;
    return out;
}

// Refines depth until the bracket is narrower than tol, or the budget runs out
// (complete = false).  Brackets from successive depths are intersected.
inline DimBounds hausdorff_dim(const CantorSpec& c, double tol, std::uint64_t budget = default_word_budget, int max_depth = 40) {
    require(tol > 0.0, errc::input, "tolerance must be positive");
    DimBounds best{0.0, std::numeric_limits<double>::infinity(), 0, false};
    for (int n = 1; n <= max_depth; ++n) {
        DimBounds b;
        try {
            b = beta_n_bounds(c, n, budget);
        } catch (const error& e) {
            if (e.code() != errc::capacity || n == 1) throw;
            best.complete = false;
            return best;
        }
        best.lower = std::max(best.lower, b.lower);
        best.upper = std::min(best.upper, b.upper);
        best.depth = n;
        if (best.width() <= tol) {
            best.complete = true;
            return best;
        }
        if (!c.is_gauss()) break; // deeper levels give the same bracket
    }
    best.complete = best.width() <= tol;
    return best;
}

// --- interior property and refinement ------------------------------------------

// Intervals I_i such that whenever psi(I_j) contains I_i, I_i sits in the
// interior of psi(I_j).  In the index model this means i is never the first
// or last member of a covering row.
inline std::vector<int> interior_witnesses(const CantorSpec& c) {
    std::vector<int> out;
    for (int i = 0; i < c.size(); ++i) {
        bool ok = true;
        for (int j = 0; j < c.size() && ok; ++j) {
            auto [a, b] = c.image_range(j);
            if (a <= i && i <= b && (i == a || i == b)) ok = false;
        }
        if (ok) out.push_back(i);
    }
    return out;
}

inline std::optional<int> has_interior_property(const CantorSpec& c) {
    auto w = interior_witnesses(c);
    if (w.empty()) return std::nullopt;
    return w.front();
}

struct Refinement {
    CantorSpec spec;
    std::vector<Word> pieces; // original words, in interval order
    int witness = -1;
    int offset = 0; // max piece length - 1; original depth k + offset refines refined depth k
};

namespace detail {

// Markov refinement by cylinders: pieces are the leaves of a prefix tree of
// admissible words.
class PieceTree {
public:
    explicit PieceTree(const SftSpec& s) : sft_(s) {
        for (int j = 0; j < s.size(); ++j) leaves_.insert(Word{j});
    }

    // Make w a leaf or an internal node by splitting every leaf above it.
    void expose(const Word& w) {
        for (std::size_t len = 1; len < w.size(); ++len) {
            Word prefix(w.begin(), w.begin() + len);
            if (leaves_.count(prefix)) split(prefix);
        }
    }

    bool is_node(const Word& w) const {
        for (std::size_t len = 1; len < w.size(); ++len)
            if (leaves_.count(Word(w.begin(), w.begin() + len))) return false;
        return true;
    }

    // psi(I_w) = I_{tail w} must be a union of pieces.
    void close() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& w : std::vector<Word>(leaves_.begin(), leaves_.end())) {
                if (w.size() < 2) continue;
                Word tail(w.begin() + 1, w.end());
                if (!is_node(tail)) {
                    expose(tail);
                    changed = true;
                }
            }
        }
    }

    // Leaves below node w (w itself if it is a leaf).
    std::vector<Word> below(const Word& w) const {
        std::vector<Word> out;
        for (const auto& leaf : leaves_)
            if (leaf.size() >= w.size() && std::equal(w.begin(), w.end(), leaf.begin())) out.push_back(leaf);
        return out;
    }

    const std::set<Word>& leaves() const noexcept { return leaves_; }

private:
    void split(const Word& w) {
        leaves_.erase(w);
        for (int b : sft_.successors(w.back())) {
            Word child = w;
            child.push_back(b);
            leaves_.insert(child);
        }
    }

    const SftSpec& sft_;
    std::set<Word> leaves_;
};

inline std::optional<Refinement> try_refinement(const CantorSpec& c, const Word& target) {
    PieceTree tree(c.combinatorics());
    tree.expose(target);
    if (!tree.leaves().count(target)) return std::nullopt;
    tree.close();
    if (!tree.leaves().count(target)) return std::nullopt;

    std::vector<Word> pieces(tree.leaves().begin(), tree.leaves().end());
    std::vector<RationalInterval> iv;
    for (const auto& w : pieces) iv.push_back(affine_cylinder(c, w));
    std::vector<int> order(pieces.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return iv[a].lo < iv[b].lo; });
    std::vector<Word> sorted;
    std::vector<RationalInterval> sorted_iv;
    std::map<Word, int> index;
    for (int k : order) {
        index[pieces[k]] = static_cast<int>(sorted.size());
        sorted.push_back(pieces[k]);
        sorted_iv.push_back(iv[k]);
    }
    int n = static_cast<int>(sorted.size());
    std::vector<std::vector<int>> b(n, std::vector<int>(n, 0));
    std::vector<int> orient;
    for (int k = 0; k < n; ++k) {
        const Word& w = sorted[k];
        orient.push_back(c.orientation()[w.front()]);
        std::vector<Word> image;
        if (w.size() >= 2) {
            image = tree.below(Word(w.begin() + 1, w.end()));
        } else {
            for (int s : c.combinatorics().successors(w.front())) {
                auto part = tree.below(Word{s});
                image.insert(image.end(), part.begin(), part.end());
            }
        }
        for (const auto& leaf : image) b[k][index.at(leaf)] = 1;
    }
    std::vector<std::string> labels;
    for (const auto& w : sorted) labels.push_back(c.combinatorics().format(w));
    bool degenerate = c.combinatorics().degenerate();
    CantorSpec refined;
    try {
        refined = CantorSpec::affine(sorted_iv, SftSpec(n, b, labels, degenerate), orient);
    } catch (const error&) {
        return std::nullopt;
    }
    int witness = index.at(target);
    auto ws = interior_witnesses(refined);
    if (std::find(ws.begin(), ws.end(), witness) == ws.end()) return std::nullopt;
    Refinement out{refined, sorted, witness, 0};
    std::size_t longest = 1;
    for (const auto& w : sorted) longest = std::max(longest, w.size());
    out.offset = static_cast<int>(longest) - 1;
    return out;
}

// Candidate witness words, most economical first.
inline std::vector<Word> refinement_candidates(const CantorSpec& c) {
    const SftSpec& s = c.combinatorics();
    std::vector<Word> out;
    for (int j = 0; j < c.size(); ++j)
        if (c.degree(j) >= 3) out.push_back({j, c.image_range(j).first + 1});
    // Chain 1 -> l2 -> b -> c with distinct leading symbols.
    for (int j = 0; j < s.size(); ++j)
        for (int l2 : s.successors(j))
            for (int bb : s.successors(l2))
                for (int cc : s.successors(bb))
                    if (j != l2 && l2 != bb && j != bb) out.push_back({j, l2, bb, cc});
    for (int len = 2; len <= 6; ++len) {
        auto words = admissible_words(s, len, 1u << 20);
        out.insert(out.end(), words.begin(), words.end());
    }
    return out;
}

} // namespace detail

// Bounded-depth check that two specs describe the same Cantor set:
// cover(a, k + offset_ab) within cover(b, k) and cover(b, k + offset_ba)
// within cover(a, k) for every k <= depth.
inline bool same_set_to_depth(const CantorSpec& a, const CantorSpec& b, int depth, int offset_ab, int offset_ba,
                              std::uint64_t budget = 1u << 22) {
    for (int k = 1; k <= depth; ++k) {
        if (!cover_within(cylinder_cover(a, k + offset_ab, budget), cylinder_cover(b, k, budget))) return false;
        if (!cover_within(cylinder_cover(b, k + offset_ba, budget), cylinder_cover(a, k, budget))) return false;
    }
    return true;
}

inline Refinement refine_to_ip_detailed(const CantorSpec& c) {
    require(c.is_affine(), errc::precondition, "refinement needs an affine spec");
    auto witnesses = interior_witnesses(c);
    if (!witnesses.empty()) {
        std::vector<Word> pieces;
        for (int j = 0; j < c.size(); ++j) pieces.push_back({j});
        return {c, pieces, witnesses.front(), 0};
    }
    bool some_three = false, all_two = true;
    for (int j = 0; j < c.size(); ++j) {
        some_three = some_three || c.degree(j) >= 3;
        all_two = all_two && c.degree(j) == 2;
    }
    require(some_three || all_two, errc::precondition,
            "refinement needs a branch of degree >= 3 or every branch of degree 2");
    for (const auto& cand : detail::refinement_candidates(c)) {
        auto r = detail::try_refinement(c, cand);
        if (!r) continue;
        // Refined cylinders are original cylinders, and each original
        // cylinder of depth k + offset sits inside a refined one of depth k.
        require(same_set_to_depth(r->spec, c, 6, 0, r->offset), errc::internal, "refinement changed the Cantor set");
        return *r;
    }
    fail(errc::internal, "no refinement with the interior property found up to depth 6");
}

inline CantorSpec refine_to_ip(const CantorSpec& c) { return refine_to_ip_detailed(c).spec; }

// Drops I_j.  Legal only when j is never an end of a covering row, so the
// remaining images are still unions of remaining intervals.
inline CantorSpec omit_interval(const CantorSpec& c, int j) {
    require(j >= 0 && j < c.size(), errc::input, "interval index out of range");
    require(c.size() >= 2, errc::precondition, "cannot omit the only interval");
    if (c.is_gauss()) {
        std::vector<int> digits = c.digits();
        digits.erase(digits.begin() + j);
        return CantorSpec::gauss(digits);
    }
    require(c.is_affine(), errc::precondition, "omission needs an affine or Gauss spec");
    for (int i = 0; i < c.size(); ++i) {
        if (i == j) continue;
        auto [a, b] = c.image_range(i);
        if (a <= j && j <= b)
            require(a < j && j < b, errc::precondition,
                    "interval " + std::to_string(j + 1) + " is an end of the image of interval " + std::to_string(i + 1));
    }
    std::vector<int> keep;
    for (int i = 0; i < c.size(); ++i)
        if (i != j) keep.push_back(i);
    SftSpec sub = c.combinatorics().induced(keep);
    for (int k = 0; k < sub.size(); ++k)
        require(!sub.successors(k).empty(), errc::precondition, "omission leaves a dead symbol; not a Markov partition");
    std::vector<RationalInterval> iv;
    std::vector<int> orient;
    for (int i : keep) {
        iv.push_back(c.intervals()[i]);
        orient.push_back(c.orientation()[i]);
    }
    return CantorSpec::affine(iv, sub, orient);
}

// psi_lambda: I_l shrinks to [a_l, (1-lambda) a_l + lambda b_l] and still maps
// affinely onto psi(I_l); everything else is unchanged.
inline CantorSpec perturb_lambda(const CantorSpec& c, int l, const Rational& lambda) {
    require(c.is_affine(), errc::precondition, "perturbation needs an affine spec");
    require(l >= 0 && l < c.size(), errc::input, "interval index out of range");
    require(lambda > 0 && lambda <= 1, errc::input, "lambda must lie in (0,1]");
    auto ws = interior_witnesses(c);
    require(std::find(ws.begin(), ws.end(), l) != ws.end(), errc::precondition,
            "interval " + std::to_string(l + 1) + " is not an interior-property witness");
    if (lambda == 1) return c;
    auto iv = c.intervals();
    iv[l].hi = (1 - lambda) * iv[l].lo + lambda * iv[l].hi;
    return CantorSpec::affine(iv, c.combinatorics(), c.orientation());
}

struct Renormalization {
    CantorSpec spec;
    std::vector<int> steps; // m_j
};

// T = psi^{m_j} on I_j, where m_j counts how long the orbit of I_j keeps
// landing exactly on a single interval.
inline Renormalization renormalize_T_detailed(const CantorSpec& c, int cap = 32) {
    require(c.is_affine(), errc::precondition, "renormalization needs an affine spec");
    int r = c.size();
    std::vector<int> m(r, 0), last(r, -1), orient(r, 1);
    for (int j = 0; j < r; ++j) {
        int cur = j, steps = 1, o = c.orientation()[j];
        while (c.degree(cur) == 1) {
            cur = c.combinatorics().successors(cur).front();
            o *= c.orientation()[cur];
            require(++steps <= cap, errc::precondition, "renormalization step count exceeds cap for interval " + std::to_string(j + 1));
        }
        m[j] = steps;
        last[j] = cur;
        orient[j] = o;
    }
    std::vector<std::vector<int>> b(r, std::vector<int>(r, 0));
    for (int j = 0; j < r; ++j)
        for (int s : c.combinatorics().successors(last[j])) b[j][s] = 1;
    bool degenerate = false;
    for (int k = 0; k < r; ++k) {
        bool col = false;
        for (int j = 0; j < r; ++j) col = col || b[j][k];
        degenerate = degenerate || !col;
    }
    CantorSpec t = CantorSpec::affine(c.intervals(), SftSpec(r, b, c.combinatorics().labels(), degenerate), orient);
    return {t, m};
}

inline CantorSpec renormalize_T(const CantorSpec& c, int cap = 32) { return renormalize_T_detailed(c, cap).spec; }

// --- thickness and sums --------------------------------------------------------

struct GapData {
    std::vector<Interval> gaps; // bounded gaps, left to right
    Interval hull;
    double max_piece = 0.0; // longest depth-n hull
};

// No subhorseshoe anywhere: the set is finitely many points.
inline bool is_finite_set(const CantorSpec& c) {
    for (const auto& comp : irreducible_components(c.combinatorics()).components)
        if (comp.kind == ComponentKind::subhorseshoe) return false;
    return true;
}

namespace detail {

template <class T>
struct GapList {
    std::vector<std::pair<T, T>> gaps;
    T lo{}, hi{}, max_piece{};
};

// hulls sorted by left end
template <class T>
GapList<T> gap_list(const std::vector<std::pair<T, T>>& hulls) {
    GapList<T> g;
    g.lo = hulls.front().first;
    T reach = hulls.front().second;
    for (const auto& [a, b] : hulls) {
        if (b - a > g.max_piece) g.max_piece = b - a;
        if (a > reach) g.gaps.push_back({reach, a});
        if (b > reach) reach = b;
    }
    g.hi = reach;
    return g;
}

inline std::vector<std::pair<Rational, Rational>> exact_hulls(const CantorSpec& c, int depth, std::uint64_t budget) {
    std::vector<std::pair<Rational, Rational>> out;
    for (const auto& w : admissible_words(c.combinatorics(), depth, budget)) {
        auto I = affine_cylinder(c, w);
        out.push_back({I.lo, I.hi});
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline double as_double(double x) { return x; }
inline double as_double(const Rational& x) { return to_double(x); }

} // namespace detail

inline GapData gap_structure(const CantorSpec& c, int depth, std::uint64_t budget = default_word_budget) {
    std::vector<std::pair<double, double>> hulls;
    for (const auto& h : cylinder_hulls(c, depth, budget)) hulls.push_back({h.lo, h.hi});
    auto l = detail::gap_list(hulls);
    GapData g;
    for (const auto& [a, b] : l.gaps) g.gaps.push_back({a, b});
    g.hull = {l.lo, l.hi};
    g.max_piece = l.max_piece;
    return g;
}

struct Thickness {
    double lower = 0.0; // minimum over every gap visible at this depth
    double upper = 0.0; // minimum over gaps at least as long as any depth-n hull
    int depth = 0;
};

namespace detail {

template <class T>
Thickness thickness_of(const GapList<T>& g, int depth) {
    Thickness t;
    t.depth = depth;
    const double inf = std::numeric_limits<double>::infinity();
    if (g.gaps.empty()) {
        t.lower = t.upper = inf;
        return t;
    }
    std::size_t n = g.gaps.size();
    auto len = [&](std::size_t k) { return g.gaps[k].second - g.gaps[k].first; };
    auto long_enough = [&](std::size_t k, std::size_t i) {
        if constexpr (std::is_same_v<T, double>)
            return len(k) >= len(i) * (1.0 - 1e-9);
        else
            return len(k) >= len(i);
    };
    // Nearest gap at least as long on each side, via monotone stacks.
    std::vector<T> left(n), right(n);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < n; ++i) {
        while (!stack.empty() && !long_enough(stack.back(), i)) stack.pop_back();
        left[i] = g.gaps[i].first - (stack.empty() ? g.lo : g.gaps[stack.back()].second);
        stack.push_back(i);
    }
    stack.clear();
    for (std::size_t i = n; i-- > 0;) {
        while (!stack.empty() && !long_enough(stack.back(), i)) stack.pop_back();
        right[i] = (stack.empty() ? g.hi : g.gaps[stack.back()].first) - g.gaps[i].second;
        stack.push_back(i);
    }
    t.lower = t.upper = inf;
    for (std::size_t i = 0; i < n; ++i) {
        T bridge = left[i] < right[i] ? left[i] : right[i];
        double ratio = as_double(T(bridge / len(i)));
        t.lower = std::min(t.lower, ratio);
        if (len(i) >= g.max_piece) t.upper = std::min(t.upper, ratio);
    }
    return t;
}

} // namespace detail

// Newhouse thickness from the gap/bridge structure at a given depth.  A gap
// at least as long as every depth-n hull has exact bridges at this depth, so
// `upper` is a true upper bound; `lower` also uses shorter visible gaps,
// whose bridges may still be cut by gaps hidden deeper.  Affine specs are
// done in exact arithmetic.
inline Thickness thickness(const CantorSpec& c, int depth, std::uint64_t budget = default_word_budget) {
    if (is_finite_set(c)) {
        Thickness t;
        t.depth = depth;
        return t;
    }
    if (c.is_affine()) return detail::thickness_of(detail::gap_list(detail::exact_hulls(c, depth, budget)), depth);
    std::vector<std::pair<double, double>> hulls;
    for (const auto& h : cylinder_hulls(c, depth, budget)) hulls.push_back({h.lo, h.hi});
    return detail::thickness_of(detail::gap_list(hulls), depth);
}

struct SumsetReport {
    std::optional<Interval> interval; // set when K1 + K2 is certified to be this interval
    Interval span;                    // [min K1 + min K2, max K1 + max K2]
    Thickness thickness1, thickness2;
    bool cover_gap_free = false; // sums of depth-m hulls leave no gap
    int cover_depth = 0;
    std::string reason;
};

inline SumsetReport sumset_report(const CantorSpec& a, const CantorSpec& b, int depth, std::uint64_t budget = default_word_budget) {
    SumsetReport rep;
    GapData ga = gap_structure(a, depth, budget), gb = gap_structure(b, depth, budget);
    rep.span = {ga.hull.lo + gb.hull.lo, ga.hull.hi + gb.hull.hi};
    rep.thickness1 = thickness(a, depth, budget);
    rep.thickness2 = thickness(b, depth, budget);

    // Outer cover: sums of hulls at depth m, with at most ~4M pairs.
    int m = 1;
    while (m < depth) {
        std::uint64_t na = count_words(a.combinatorics(), m + 1), nb = count_words(b.combinatorics(), m + 1);
        if (na * nb > (1u << 22)) break;
        ++m;
    }
    rep.cover_depth = m;
    auto ha = cylinder_hulls(a, m, budget), hb = cylinder_hulls(b, m, budget);
    std::vector<Interval> sums;
    sums.reserve(ha.size() * hb.size());
    for (const auto& x : ha)
        for (const auto& y : hb) sums.push_back({x.lo + y.lo, x.hi + y.hi});
    std::sort(sums.begin(), sums.end(), [](const Interval& p, const Interval& q) { return p.lo < q.lo; });
    double reach = sums.front().hi;
    rep.cover_gap_free = true;
    for (const auto& s : sums) {
        if (s.lo > reach + 1e-12) {
            rep.cover_gap_free = false;
            break;
        }
        reach = std::max(reach, s.hi);
    }
    if (!rep.cover_gap_free) {
        rep.reason = "sum of depth-" + std::to_string(m) + " hulls has a gap";
        return rep;
    }
    double la = ga.hull.length(), lb = gb.hull.length();
    double max_gap_a = 0.0, max_gap_b = 0.0;
    for (const auto& g : ga.gaps) max_gap_a = std::max(max_gap_a, g.length());
    for (const auto& g : gb.gaps) max_gap_b = std::max(max_gap_b, g.length());
    bool a_point = is_finite_set(a), b_point = is_finite_set(b);
    bool a_interval = ga.gaps.empty() && !a_point, b_interval = gb.gaps.empty() && !b_point;
    if (a_point || b_point) {
        // A finite set plus an interval is an interval only when the set is a single point.
        bool a_single = a_point && count_words(a.combinatorics(), depth) == 1;
        bool b_single = b_point && count_words(b.combinatorics(), depth) == 1;
        if ((a_single && b_interval) || (b_single && a_interval)) {
            rep.interval = rep.span;
            rep.reason = "translate of an interval";
        } else {
            rep.reason = "finite set plus a set with gaps";
        }
        return rep;
    }
    if (a_interval || b_interval) {
        // Interval plus a set whose gaps are no longer than the interval.
        if ((a_interval && la >= max_gap_b) || (b_interval && lb >= max_gap_a)) {
            rep.interval = rep.span;
            rep.reason = "interval longer than every gap of the other set";
            return rep;
        }
    }
    bool thick = rep.thickness1.lower * rep.thickness2.lower >= 1.0;
    bool interleaved = la >= max_gap_b && lb >= max_gap_a;
    if (thick && interleaved) {
        rep.interval = rep.span;
        rep.reason = "gap lemma";
    } else {
        rep.reason = thick ? "hulls shorter than the other set's gaps" : "thickness product below 1";
    }
    return rep;
}

inline std::optional<Interval> sumset_interval(const CantorSpec& a, const CantorSpec& b, int depth,
                                               std::uint64_t budget = default_word_budget) {
    return sumset_report(a, b, depth, budget).interval;
}

} // namespace spectra_lab
