#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "spectra_lab/error.hpp"
#include "spectra_lab/sft.hpp"

namespace spectra_lab {

struct DimBounds {
    double lower = 0.0;
    double upper = 0.0;
    int depth = 0;
    bool complete = true; // false when a budget stopped refinement early

    double width() const noexcept { return upper - lower; }
    double mid() const noexcept { return 0.5 * (lower + upper); }
    bool contains(double x, double slack = 0.0) const noexcept { return lower - slack <= x && x <= upper + slack; }
};

inline DimBounds max_bounds(const DimBounds& a, const DimBounds& b) {
    DimBounds out;
    out.lower = std::max(a.lower, b.lower);
    out.upper = std::max(a.upper, b.upper);
    out.depth = std::max(a.depth, b.depth);
    out.complete = a.complete && b.complete;
    return out;
}

inline DimBounds sum_bounds(const DimBounds& a, const DimBounds& b) {
    DimBounds out;
    out.lower = a.lower + b.lower;
    out.upper = a.upper + b.upper;
    out.depth = std::max(a.depth, b.depth);
    out.complete = a.complete && b.complete;
    return out;
}

inline double round_down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
inline double round_up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

inline constexpr double moran_tolerance = 1e-13;
inline constexpr double beta_tolerance = 1e-12;

// Root of sum_j r_j^d = 1.
inline double moran_dimension(const std::vector<double>& rates) {
    require(!rates.empty(), errc::input, "rate list is empty");
    for (double r : rates) require(r > 0.0 && r < 1.0, errc::input, "contraction rates must lie in (0,1)");
    auto phi = [&](double d) {
        double s = 0.0;
        for (double r : rates) s += std::pow(r, d);
        return s;
    };
    if (rates.size() == 1) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (phi(hi) > 1.0) hi *= 2.0;
    while (hi - lo > 0.25 * moran_tolerance) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (phi(mid) > 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Nonnegative matrix given as weighted edges, each weight bracketed by
// [exp(d * log_lo), exp(d * log_hi)] as a function of the exponent d.
// Parallel edges add.
struct WeightedGraph {
    int n = 0;
    std::vector<int> from, to;
    std::vector<double> log_lo, log_hi; // logs of contraction bounds, all < 0

    void add(int u, int v, double lo, double hi) {
        from.push_back(u);
        to.push_back(v);
        log_lo.push_back(lo);
        log_hi.push_back(hi);
    }
    std::size_t edges() const noexcept { return from.size(); }
};

namespace detail {

struct SccBlock {
    std::vector<int> nodes;         // global ids
    std::vector<int> row_start;     // CSR over local ids
    std::vector<int> col;           // local ids
    std::vector<std::size_t> edge;  // index into the graph's edge arrays
    std::vector<double> vec;        // warm-start Perron vector
    bool single_cycle = false;
};

inline std::vector<SccBlock> scc_blocks(const WeightedGraph& g) {
    std::vector<std::vector<int>> succ(g.n);
    for (std::size_t e = 0; e < g.edges(); ++e) succ[g.from[e]].push_back(g.to[e]);
    int count = 0;
    auto comp = tarjan_scc(g.n, succ, count);
    std::vector<std::vector<int>> members(count);
    for (int v = 0; v < g.n; ++v) members[comp[v]].push_back(v);
    std::vector<int> local(g.n, -1);
    std::vector<SccBlock> blocks;
    for (int c = 0; c < count; ++c) {
        SccBlock b;
        b.nodes = members[c];
        for (std::size_t k = 0; k < b.nodes.size(); ++k) local[b.nodes[k]] = static_cast<int>(k);
        std::vector<std::vector<std::pair<int, std::size_t>>> rows(b.nodes.size());
        for (std::size_t e = 0; e < g.edges(); ++e)
            if (comp[g.from[e]] == c && comp[g.to[e]] == c) rows[local[g.from[e]]].push_back({local[g.to[e]], e});
        std::size_t internal = 0;
        for (auto& r : rows) internal += r.size();
        if (internal == 0) continue; // no cycle through this block
        b.single_cycle = std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.size() == 1; });
        b.row_start.push_back(0);
        for (auto& r : rows) {
            for (auto& [j, e] : r) {
                b.col.push_back(j);
                b.edge.push_back(e);
            }
            b.row_start.push_back(static_cast<int>(b.col.size()));
        }
        b.vec.assign(b.nodes.size(), 1.0);
        blocks.push_back(std::move(b));
    }
    return blocks;
}

// Collatz-Wielandt bracket for the Perron root of an irreducible block, via
// power iteration on I + M (primitive even when M is periodic).
inline std::pair<double, double> perron_bracket(SccBlock& b, const std::vector<double>& weight) {
    std::size_t n = b.nodes.size();
    std::vector<double> y(n);
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 20000; ++iter) {
        double cur_lo = std::numeric_limits<double>::infinity(), cur_hi = 0.0, norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = b.vec[i];
            for (int k = b.row_start[i]; k < b.row_start[i + 1]; ++k) s += weight[k] * b.vec[b.col[k]];
            y[i] = s;
            double ratio = s / b.vec[i];
            cur_lo = std::min(cur_lo, ratio);
            cur_hi = std::max(cur_hi, ratio);
            norm = std::max(norm, s);
        }
        lo = std::max(lo, cur_lo);
        hi = std::min(hi, cur_hi);
        for (std::size_t i = 0; i < n; ++i) b.vec[i] = std::max(y[i] / norm, 1e-300);
        if (hi - lo <= 1e-15 * hi) break;
    }
    // Rounding in the products is below n ulps; widen by a fixed relative margin.
    double slack = 1e-14 * (1.0 + 1e-3 * static_cast<double>(n));
    return {lo * (1.0 - slack) - 1.0, hi * (1.0 + slack) - 1.0};
}

} // namespace detail

// Certified bracket for the root d of rho(M(d)) = 1, where M(d) has entries
// bracketed edge-wise as in WeightedGraph.  The lower end uses the smallest
// contractions, the upper end the largest.  The result is the maximum over
// irreducible blocks; an acyclic graph gives [0, 0].
inline DimBounds transfer_root(const WeightedGraph& g, double tol = beta_tolerance) {
    auto blocks = detail::scc_blocks(g);
    DimBounds out;
    for (auto& b : blocks) {
        if (b.single_cycle) {
            continue;
        }
        auto rho = [&](double d, bool upper) {
            std::vector<double> w(b.edge.size());
            for (std::size_t k = 0; k < b.edge.size(); ++k) {
                double lc = upper ? g.log_hi[b.edge[k]] : g.log_lo[b.edge[k]];
                w[k] = std::exp(d * lc);
            }
            auto br = detail::perron_bracket(b, w);
            return upper ? br.second : br.first;
        };
        double dmax = 1.0;
        while (rho(dmax, true) >= 1.0) {
            dmax *= 2.0;
            require(dmax <= 64.0, errc::input, "transfer operator is not contracting");
        }
        // Upper end: keep the right endpoint, where rho_hi < 1 is certified.
        double lo = 0.0, hi = dmax;
        while (hi - lo > 0.5 * tol) {
            double mid = 0.5 * (lo + hi);
            (rho(mid, true) < 1.0 ? hi : lo) = mid;
        }
        double upper = hi;
        // Lower end: keep the left endpoint, where rho_lo > 1 is certified.
        lo = 0.0;
        hi = std::min(dmax, upper);
        while (hi - lo > 0.5 * tol) {
            double mid = 0.5 * (lo + hi);
            (rho(mid, false) > 1.0 ? lo : hi) = mid;
        }
        double lower = lo;
        out.lower = std::max(out.lower, lower);
        out.upper = std::max(out.upper, upper);
    }
    return out;
}

} // namespace spectra_lab
