#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "spectra_lab/random_models.hpp"
#include "spectra_lab/sft.hpp"

using namespace spectra_lab;

namespace {

SftSpec upper() { return SftSpec(2, {{1, 1}, {0, 1}}); }

// Entry sum of B^(n-1), plain integer matrices.
std::uint64_t matrix_power_count(const SftSpec& s, int n) {
    int r = s.size();
    std::vector<std::uint64_t> v(r, 1);
    for (int k = 1; k < n; ++k) {
        std::vector<std::uint64_t> next(r, 0);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j)
                if (s.allowed(i, j)) next[i] += v[j];
        v = next;
    }
    std::uint64_t total = 0;
    for (auto x : v) total += x;
    return total;
}

std::vector<std::string> formatted(const SftSpec& s, const std::vector<Word>& ws) {
    std::vector<std::string> out;
    for (const auto& w : ws) out.push_back(s.format(w));
    return out;
}

} // namespace

TEST(Sft, RejectsDeadSymbolsUnlessDegenerate) {
    EXPECT_THROW(SftSpec(2, {{0, 1}, {0, 0}}), error);
    EXPECT_NO_THROW(SftSpec(2, {{0, 1}, {0, 0}}, {}, true));
    EXPECT_THROW(SftSpec(2, {{1, 2}, {1, 1}}), error);
    EXPECT_THROW(SftSpec(2, {{1}, {1, 1}}), error);
}

TEST(Sft, AdmissibleWordsFullShift) {
    auto s = SftSpec::full(2);
    EXPECT_EQ(formatted(s, admissible_words(s, 2)), (std::vector<std::string>{"11", "12", "21", "22"}));
    EXPECT_EQ(admissible_words(s, 10).size(), 1024u);
}

TEST(Sft, AdmissibleWordsForbiddenPair) {
    auto s = upper();
    EXPECT_EQ(formatted(s, admissible_words(s, 2)), (std::vector<std::string>{"11", "12", "22"}));
}

TEST(Sft, WordsAreLexicographic) {
    auto s = SftSpec(3, {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}});
    auto w = admissible_words(s, 5);
    EXPECT_TRUE(std::is_sorted(w.begin(), w.end()));
    for (const auto& x : w) EXPECT_TRUE(s.is_admissible(x));
}

TEST(Sft, BudgetIsEnforced) {
    auto s = SftSpec::full(4);
    try {
        admissible_words(s, 12, 1000);
        FAIL() << "expected a capacity error";
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::capacity);
    }
}

TEST(Sft, Concat) {
    auto s = SftSpec::full(2);
    EXPECT_EQ(s.format(concat(s.parse("12"), s.parse("21"), s)), "1221");
    EXPECT_EQ(s.format(concat(s.parse("1"), s.parse("1"), s)), "11");
    auto b = SftSpec(2, {{1, 1}, {0, 1}});
    try {
        concat(b.parse("12"), b.parse("12"), b);
        FAIL() << "expected junction error";
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::junction_forbidden);
        EXPECT_NE(std::string(e.what()).find("2 -> 1"), std::string::npos);
    }
}

TEST(Sft, ComponentsUpperTriangular) {
    auto dec = irreducible_components(upper());
    ASSERT_EQ(dec.components.size(), 2u);
    EXPECT_EQ(dec.components[0].members, (std::vector<int>{0}));
    EXPECT_EQ(dec.components[1].members, (std::vector<int>{1}));
    EXPECT_EQ(dec.components[0].kind, ComponentKind::trivial_periodic);
    EXPECT_EQ(dec.components[1].kind, ComponentKind::trivial_periodic);
    EXPECT_TRUE(dec.reachable(0, 1));
    EXPECT_FALSE(dec.reachable(1, 0));
    EXPECT_EQ(transient_pairs(dec), (std::vector<std::pair<int, int>>{{0, 1}}));
}

TEST(Sft, ComponentsFullShift) {
    auto dec = irreducible_components(SftSpec::full(2));
    ASSERT_EQ(dec.components.size(), 1u);
    EXPECT_EQ(dec.components[0].kind, ComponentKind::subhorseshoe);
    EXPECT_TRUE(transient_pairs(dec).empty());
}

TEST(Sft, ComponentsTransient) {
    auto dec = irreducible_components(SftSpec(2, {{0, 1}, {0, 0}}, {}, true));
    ASSERT_EQ(dec.components.size(), 2u);
    for (const auto& c : dec.components) EXPECT_EQ(c.kind, ComponentKind::transient_state);
    EXPECT_TRUE(transient_pairs(dec).empty());
}

TEST(Sft, SingleCycleIsTrivial) {
    // 1 -> 2 -> 3 -> 1: one cycle through every symbol
    auto dec = irreducible_components(SftSpec(3, {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}));
    ASSERT_EQ(dec.components.size(), 1u);
    EXPECT_EQ(dec.components[0].kind, ComponentKind::trivial_periodic);
    // adding a chord gives a second cycle
    auto dec2 = irreducible_components(SftSpec(3, {{0, 1, 0}, {1, 0, 1}, {1, 0, 0}}));
    EXPECT_EQ(dec2.components[0].kind, ComponentKind::subhorseshoe);
}

TEST(Sft, WindowLiftExamples) {
    auto l = window_lift(SftSpec::full(2), 1, 0);
    EXPECT_EQ(l.spec.labels(), (std::vector<std::string>{"11", "12", "21", "22"}));
    EXPECT_TRUE(l.spec.allowed(l.node_of({0, 1}), l.node_of({1, 0})));
    EXPECT_FALSE(l.spec.allowed(l.node_of({0, 1}), l.node_of({0, 1})));
    auto u = window_lift(upper(), 1, 0);
    EXPECT_EQ(u.spec.labels(), (std::vector<std::string>{"11", "12", "22"}));
    auto f4 = window_lift(SftSpec::full(4), 1, 0);
    EXPECT_EQ(f4.spec.size(), 16);
    EXPECT_EQ(f4.spec.edge_count(), 64u);
    auto same = window_lift(upper(), 0, 0);
    EXPECT_EQ(same.spec.matrix(), upper().matrix());
}

TEST(Sft, WindowLiftDecodesCycles) {
    auto s = SftSpec(3, {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}});
    auto l = window_lift(s, 1, 1);
    for (const auto& c : primitive_cycles(s, 5)) {
        Word lifted = l.encode_cycle(c);
        EXPECT_TRUE(l.spec.is_cycle(lifted));
        EXPECT_EQ(l.decode(lifted), c);
    }
}

TEST(Sft, PrimitiveCycles) {
    auto s = SftSpec::full(2);
    auto c = primitive_cycles(s, 4);
    // necklace counts 2, 1, 2, 3
    EXPECT_EQ(formatted(s, c), (std::vector<std::string>{"1", "2", "12", "112", "122", "1112", "1122", "1222"}));
    EXPECT_TRUE(is_lyndon({0, 0, 1}));
    EXPECT_FALSE(is_lyndon({0, 1, 0}));
    EXPECT_EQ(canonical_rotation({1, 0, 0}), (Word{0, 0, 1}));
    EXPECT_EQ(primitive_root({0, 1, 0, 1}), (Word{0, 1}));
}

TEST(Sft, RecurrentCorePrunesDeadEnds) {
    auto s = SftSpec::full(3);
    EXPECT_EQ(recurrent_core(s, {true, true, false}), (std::vector<int>{0, 1}));
    auto chain = SftSpec(3, {{1, 1, 0}, {0, 0, 1}, {0, 0, 1}});
    // 2 is transient between 1 and 3, and stays because it lies on a bi-infinite path
    EXPECT_EQ(recurrent_core(chain, {true, true, true}), (std::vector<int>{0, 1, 2}));
    // without 3, the symbol 2 has no future
    EXPECT_EQ(recurrent_core(chain, {true, true, false}), (std::vector<int>{0}));
}

// --- properties --------------------------------------------------------------

TEST(SftProperty, WordCountsMatchMatrixPowers) {
    Rng rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        auto s = random_sft(rng, static_cast<int>(rng.uniform(1, 5)), 0.5);
        for (int n = 1; n <= 12; ++n) {
            std::uint64_t expect = matrix_power_count(s, n);
            EXPECT_EQ(count_words(s, n), expect);
            if (expect <= 5000) {
                EXPECT_EQ(admissible_words(s, n).size(), expect);
            }
        }
    }
}

TEST(SftProperty, ComponentsInvariantUnderPermutation) {
    Rng rng(12);
    for (int trial = 0; trial < 40; ++trial) {
        int r = static_cast<int>(rng.uniform(2, 6));
        auto s = random_sft(rng, r, 0.35);
        std::vector<int> perm(r);
        for (int i = 0; i < r; ++i) perm[i] = i;
        for (int i = r - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform(0, i)]);
        std::vector<std::vector<int>> b(r, std::vector<int>(r));
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) b[perm[i]][perm[j]] = s.allowed(i, j);
        SftSpec t(r, b);
        auto d1 = irreducible_components(s), d2 = irreducible_components(t);
        ASSERT_EQ(d1.components.size(), d2.components.size());
        // same multiset of (relabelled members, kind)
        std::multiset<std::pair<std::vector<int>, ComponentKind>> a, c;
        for (const auto& comp : d1.components) {
            std::vector<int> m;
            for (int v : comp.members) m.push_back(perm[v]);
            std::sort(m.begin(), m.end());
            a.insert({m, comp.kind});
        }
        for (const auto& comp : d2.components) c.insert({comp.members, comp.kind});
        EXPECT_EQ(a, c);
        EXPECT_EQ(transient_pairs(d1).size(), transient_pairs(d2).size());
    }
}

TEST(SftProperty, DecompositionIsAPartitionAndADag) {
    Rng rng(13);
    for (int trial = 0; trial < 60; ++trial) {
        auto s = random_sft(rng, static_cast<int>(rng.uniform(1, 7)), 0.3);
        auto dec = irreducible_components(s);
        std::vector<int> seen(s.size(), 0);
        for (std::size_t k = 0; k < dec.components.size(); ++k)
            for (int v : dec.components[k].members) {
                ++seen[v];
                EXPECT_EQ(dec.component_of[v], static_cast<int>(k));
            }
        for (int x : seen) EXPECT_EQ(x, 1);
        for (std::size_t i = 0; i < dec.components.size(); ++i) {
            EXPECT_FALSE(dec.reaches[i][i]);
            for (std::size_t j = 0; j < i; ++j) EXPECT_FALSE(dec.reaches[i][j]) << "edges must go forward";
        }
        // block upper triangular in the reported ordering
        std::vector<int> pos(s.size());
        for (std::size_t k = 0; k < dec.ordering.size(); ++k) pos[dec.ordering[k]] = static_cast<int>(k);
        for (int u = 0; u < s.size(); ++u)
            for (int v : s.successors(u))
                if (dec.component_of[u] != dec.component_of[v]) {
                    EXPECT_LT(pos[u], pos[v]);
                }
    }
}

TEST(SftProperty, WindowLiftPreservesPeriodicOrbitCounts) {
    Rng rng(14);
    for (int trial = 0; trial < 15; ++trial) {
        auto s = random_sft(rng, static_cast<int>(rng.uniform(2, 3)), 0.6);
        int past = static_cast<int>(rng.uniform(0, 2)), future = static_cast<int>(rng.uniform(0, 1));
        auto l = window_lift(s, past, future);
        auto a = primitive_cycles(s, 6), b = primitive_cycles(l.spec, 6);
        for (int p = 1; p <= 6; ++p) {
            auto count = [p](const std::vector<Word>& c) {
                return std::count_if(c.begin(), c.end(), [p](const Word& w) { return static_cast<int>(w.size()) == p; });
            };
            EXPECT_EQ(count(a), count(b)) << "period " << p;
        }
    }
}
