#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "spectra_lab/io.hpp"
#include "spectra_lab/random_models.hpp"
#include "spectra_lab/spectra.hpp"

using namespace spectra_lab;

namespace {

QuadSurd S(long long p, long long q, long long r, long long d) { return QuadSurd(p, q, r, d); }
QuadSurd Q(long long p, long long q = 1) { return QuadSurd::from_rational(Rational(p, q)); }

Bundle load_bundle(const std::string& dir) {
    return io::bundle_from_json(io::read_file(std::string(DATA_DIR) + "/" + dir + "/bundle.json"));
}

bool subset(const SpectrumSample& a, const SpectrumSample& b) {
    for (const auto& e : a.entries)
        if (!b.contains(e.value)) return false;
    return true;
}

std::vector<QuadSurd> values(const SpectrumSample& s) {
    std::vector<QuadSurd> out;
    for (const auto& e : s.entries) out.push_back(e.value);
    return out;
}

} // namespace

// --- periodic values ------------------------------------------------------------

TEST(OrbitValue, ClassicalExamples) {
    auto two = SftSpec::full(2);
    EXPECT_EQ(orbit_value(two, two.parse("1"), CfPotential{}).value, S(0, 1, 1, 5));
    EXPECT_EQ(orbit_value(two, two.parse("2"), CfPotential{}).value, S(0, 2, 1, 2));
    EXPECT_EQ(orbit_value(two, two.parse("2211"), CfPotential{}).value, S(0, 1, 5, 221));
    auto v = orbit_value(two, two.parse("1122"), CfPotential{});
    EXPECT_NEAR(v.approx, std::sqrt(221.0) / 5, 1e-12);
    EXPECT_EQ(v.error, 0.0);
}

TEST(OrbitValue, TablePotential) {
    auto b = load_bundle("split_horseshoe");
    EXPECT_EQ(orbit_value(b.sft, b.sft.parse("13"), b.potential).value, Q(8, 5));
    EXPECT_EQ(orbit_value(b.sft, b.sft.parse("12"), b.potential).value, Q(1));
    EXPECT_THROW(orbit_value(SftSpec(2, {{1, 1}, {1, 0}}), Word{1, 1}, CfPotential{}), error);
}

TEST(OrbitValue, TruncationErrorShrinks) {
    auto two = SftSpec::full(2);
    auto w = two.parse("1122");
    auto exact = orbit_value(two, w, CfPotential{});
    double prev = INFINITY;
    for (int depth = 2; depth <= 20; depth += 3) {
        auto t = cf_truncated_value(two, w, exact.position, depth);
        EXPECT_GT(t.error, 0.0);
        EXPECT_LT(t.error, prev);
        EXPECT_LE(std::fabs(to_double(t.value) - exact.approx), t.error + 1e-15);
        prev = t.error;
    }
}

TEST(Spectrum, BelowThree) {
    auto s = spectrum_sample(SftSpec::full(2), CfPotential{}, 2);
    EXPECT_TRUE(s.contains(S(0, 1, 1, 5)));
    EXPECT_TRUE(s.contains(S(0, 2, 1, 2)));
    auto s4 = spectrum_sample(SftSpec::full(2), CfPotential{}, 4);
    EXPECT_TRUE(s4.contains(S(0, 1, 5, 221)));
    for (const auto& e : s4.entries) {
        EXPECT_FALSE(S(0, 1, 1, 5) < e.value && e.value < S(0, 2, 1, 2)) << e.value.to_string();
        EXPECT_FALSE(S(0, 2, 1, 2) < e.value && e.value < S(0, 1, 5, 221)) << e.value.to_string();
    }
    for (std::size_t k = 1; k < s4.entries.size(); ++k) EXPECT_LT(s4.entries[k - 1].value, s4.entries[k].value);
    // witnesses re-evaluate to their values
    for (const auto& e : s4.entries) EXPECT_EQ(orbit_value(s4.spec, e.witness, CfPotential{}).value, e.value);
}

TEST(Spectrum, LambdaFourMaximum) {
    auto four = SftSpec::full(4);
    auto s = spectrum_sample(four, CfPotential{}, 1);
    EXPECT_EQ(s.entries.back().value, S(0, 2, 1, 5)); // (4): 4 + 2[0; 4, 4, ...]
    auto s2 = spectrum_sample(four, CfPotential{}, 2);
    EXPECT_EQ(s2.entries.back().value, QuadSurd::sqrt_of(32));
    EXPECT_EQ(four.format(s2.entries.back().witness), "14");
    EXPECT_EQ(cf_max_value({1, 2, 3, 4}), QuadSurd::sqrt_of(32));
    EXPECT_EQ(QuadSurd(4) + QuadSurd(2) * extremal_values(4).second, QuadSurd::sqrt_of(32));
}

TEST(Spectrum, NjLowerBound) {
    EXPECT_EQ(nj_lower_bound(5), S(20, 1, 5, 45));
    EXPECT_NEAR(nj_lower_bound(5).to_double(), 5.3416407865, 1e-9);
    EXPECT_EQ(nj_lower_bound(1), S(0, 1, 1, 5));
    EXPECT_EQ(nj_lower_bound(4), S(3, 1, 1, 2));
    EXPECT_THROW(nj_lower_bound(0), error);
}

// --- sublevel sets of the split horseshoe -----------------------------------------

TEST(Sublevel, SplitHorseshoeComponents) {
    auto b = load_bundle("split_horseshoe");
    auto low = sublevel_set(b.sft, b.potential, Rational(12, 10), b.rates);
    std::vector<std::vector<int>> horseshoes;
    for (std::size_t c = 0; c < low.dec.components.size(); ++c)
        if (low.dec.components[c].kind == ComponentKind::subhorseshoe) horseshoes.push_back(low.base_symbols(static_cast<int>(c)));
    std::sort(horseshoes.begin(), horseshoes.end());
    EXPECT_EQ(horseshoes, (std::vector<std::vector<int>>{{0, 1}, {2, 3}}));
    EXPECT_TRUE(low.transients.empty());

    auto mid = sublevel_set(b.sft, b.potential, Rational(14, 10), b.rates);
    ASSERT_EQ(mid.transients.size(), 1u);
    EXPECT_EQ(mid.base_symbols(mid.transients[0].from), (std::vector<int>{0, 1}));
    EXPECT_EQ(mid.base_symbols(mid.transients[0].to), (std::vector<int>{2, 3}));

    auto high = sublevel_set(b.sft, b.potential, Rational(16, 10), b.rates);
    EXPECT_EQ(high.dec.components.size(), 1u);
    EXPECT_EQ(high.kept.size(), 16u);
}

TEST(Sublevel, SplitHorseshoeDimensions) {
    auto b = load_bundle("split_horseshoe");
    auto mid = sublevel_set(b.sft, b.potential, Rational(14, 10), b.rates);
    EXPECT_NEAR(dim_sublevel(mid).lower, 1.10, 1e-12);
    EXPECT_NEAR(dim_sublevel(mid).upper, 1.10, 1e-12);
    EXPECT_NEAR(D_of_t(mid).lower, 0.95, 1e-12);
    EXPECT_NEAR(D_of_t(mid).upper, 0.95, 1e-12);
    auto low = sublevel_set(b.sft, b.potential, Rational(12, 10), b.rates);
    EXPECT_NEAR(dim_sublevel(low).mid(), 0.95, 1e-12);
    EXPECT_NEAR(D_of_t(low).mid(), 0.95, 1e-12);
    auto empty = sublevel_set(b.sft, b.potential, Rational(1, 2), b.rates);
    EXPECT_TRUE(empty.empty());
    EXPECT_EQ(dim_sublevel(empty).lower, 0.0);
    EXPECT_EQ(dim_sublevel(empty).upper, 0.0);
    EXPECT_EQ(D_of_t(empty).upper, 0.0);
    // full 4-shift: both sides are one Moran root of the stable rates, doubled by symmetry of the table
    auto high = sublevel_set(b.sft, b.potential, Rational(16, 10), b.rates);
    EXPECT_NEAR(dim_sublevel(high).mid(), 1.8855224341255701, 1e-11);
}

TEST(PhaseTransitions, SplitHorseshoe) {
    auto rep = phase_transitions(load_bundle("split_horseshoe"));
    ASSERT_EQ(rep.a.status, CrossingStatus::found);
    ASSERT_EQ(rep.a_tilde.status, CrossingStatus::found);
    ASSERT_EQ(rep.b.status, CrossingStatus::found);
    EXPECT_EQ(rep.a.t, Rational(13, 10));
    EXPECT_EQ(rep.a_tilde.t, Rational(8, 5));
    EXPECT_EQ(rep.b.t, Rational(1));
    EXPECT_LT(rep.a.below.upper, 1.0);
    EXPECT_GT(rep.a.at.lower, 1.0);
    ASSERT_EQ(rep.table.size(), 3u);
    EXPECT_EQ(rep.table[0].components, 2);
    EXPECT_EQ(rep.table[0].transient_pairs, 0);
    EXPECT_EQ(rep.table[1].components, 6);
    EXPECT_EQ(rep.table[1].transient_pairs, 1);
    EXPECT_EQ(rep.table[2].components, 1);
    EXPECT_FALSE(rep.indeterminate());
}

TEST(PhaseTransitions, ConstantPotential) {
    auto b = load_bundle("constant_potential");
    auto rep = phase_transitions(b);
    ASSERT_EQ(rep.table.size(), 1u);
    EXPECT_EQ(rep.a.status, CrossingStatus::found);
    EXPECT_EQ(rep.a.t, Rational(2));
    EXPECT_EQ(rep.a_tilde.t, Rational(2));
    EXPECT_EQ(rep.b.t, Rational(2));
    EXPECT_EQ(rep.a.below.upper, 0.0); // empty below
    EXPECT_EQ(rep.table[0].kept, b.sft.size());
    EXPECT_TRUE(sublevel_set(b.sft, b.potential, Rational(199, 100), b.rates).empty());
}

TEST(PhaseTransitions, StraddleIsIndeterminate) {
    // full 2-shift with total dimension exactly 1 after the only threshold
    Bundle b;
    b.sft = SftSpec::full(2);
    b.potential.values = {{{0}, Rational(1)}, {{1}, Rational(1)}};
    b.rates.stable = {0.25, 0.25};
    b.rates.unstable = {0.25, 0.25};
    auto rep = phase_transitions(b);
    EXPECT_EQ(rep.a.status, CrossingStatus::indeterminate);
    EXPECT_TRUE(rep.indeterminate());
    EXPECT_FALSE(rep.a.detail.empty());
}

TEST(FiniteTypeSpectra, SplitHorseshoe) {
    auto b = load_bundle("split_horseshoe");
    auto fts = sublevel_set(b.sft, b.potential, Rational(14, 10), b.rates);
    auto lag = lagrange_finite_type(fts, b.potential, 6);
    auto mk = markov_finite_type(fts, b.potential, 6);
    EXPECT_EQ(values(lag), std::vector<QuadSurd>{Q(1)});
    EXPECT_TRUE(mk.contains(Q(13, 10)));
    EXPECT_TRUE(subset(lag, mk));
    bool bridged = false;
    for (const auto& e : mk.entries)
        if (e.value == Q(13, 10)) {
            bridged = e.bridged;
            EXPECT_EQ(mk.witness_text(e).find(")^inf."), 1u + b.sft.format(e.witness).size());
        }
    EXPECT_TRUE(bridged);
}

TEST(FiniteTypeSpectra, SingleHorseshoeMatchesFullSample) {
    auto b = load_bundle("split_horseshoe");
    auto fts = sublevel_set(b.sft, b.potential, Rational(16, 10), b.rates);
    EXPECT_EQ(values(lagrange_finite_type(fts, b.potential, 4)), values(spectrum_sample(b.sft, b.potential, 4)));
    EXPECT_EQ(values(markov_finite_type(fts, b.potential, 4)), values(spectrum_sample(b.sft, b.potential, 4)));
}

// --- classical spectrum ---------------------------------------------------------------

TEST(MarkovTree, Examples) {
    auto five = markov_tree(5);
    ASSERT_EQ(five.size(), 3u);
    EXPECT_EQ(five[0].m, 1);
    EXPECT_EQ(five[1].m, 2);
    EXPECT_EQ(five[2].m, 5);
    EXPECT_EQ(five[0].value, S(0, 1, 1, 5));
    EXPECT_EQ(five[1].value, S(0, 2, 1, 2));
    EXPECT_EQ(five[2].value, S(0, 1, 5, 221));
    EXPECT_EQ(markov_tree(2).size(), 2u);
    auto big = markov_tree(200);
    std::vector<long long> ms;
    for (const auto& e : big) ms.push_back(static_cast<long long>(e.m));
    EXPECT_EQ(ms, (std::vector<long long>{1, 2, 5, 13, 29, 34, 89, 169, 194}));
    for (std::size_t k = 0; k < big.size(); ++k) {
        EXPECT_TRUE(big[k].cross_checked);
        EXPECT_LT(big[k].value, QuadSurd(3));
        if (k) {
            EXPECT_LT(big[k - 1].value, big[k].value);
        }
        BigInt m = big[k].m;
        EXPECT_EQ(big[k].value, QuadSurd(0, 1, m, 9 * m * m - 4));
    }
}

TEST(MarkovTree, TriplesSolveMarkovEquation) {
    // every m below 1000 sits in a triple x^2 + y^2 + z^2 = 3xyz with m largest
    std::set<long long> found;
    for (const auto& e : markov_tree(1000)) found.insert(static_cast<long long>(e.m));
    std::set<long long> brute;
    for (long long z = 1; z <= 1000; ++z)
        for (long long y = 1; y <= z; ++y) {
            // x^2 - 3yz x + y^2 + z^2 = 0
            long long disc = 9 * y * y * z * z - 4 * (y * y + z * z);
            if (disc < 0) continue;
            long long r = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(disc))));
            for (long long s = r - 1; s <= r + 1; ++s)
                if (s >= 0 && s * s == disc && (3 * y * z - s) % 2 == 0) {
                    long long x = (3 * y * z - s) / 2;
                    if (x >= 1 && x <= y) brute.insert(z);
                }
        }
    EXPECT_EQ(found, brute);
}

TEST(NamedConstants, Values) {
    std::map<std::string, QuadSurd> c;
    for (const auto& k : named_constants()) c[k.name] = k.value;
    EXPECT_NEAR(c.at("freiman_c").to_double(), 4.52782956616, 1e-9);
    EXPECT_EQ(c.at("freiman_c"), QuadSurd(BigInt(2221564096LL), BigInt(283748), BigInt(491993569), BigInt(462)));
    EXPECT_NEAR(c.at("sqrt12").to_double(), 3.4641016151, 1e-9);
    EXPECT_NEAR(c.at("one_plus_sqrt21").to_double(), 5.5825756950, 1e-9);
    EXPECT_NEAR(c.at("n5_bound").to_double(), 5.341640787, 1e-9);
    EXPECT_EQ(c.at("sqrt32"), QuadSurd::sqrt_of(32));
    EXPECT_EQ(c.at("k1"), S(0, 1, 1, 5));
    EXPECT_EQ(c.at("k2"), S(0, 2, 1, 2));
    EXPECT_EQ(c.at("k3"), S(0, 1, 5, 221));
    EXPECT_LT(c.at("bumby_lower"), c.at("sqrt12"));
}

TEST(Lambda4, Consistency) {
    auto r = lambda4_consistency(6);
    EXPECT_TRUE(r.tree_values_present);
    EXPECT_TRUE(r.digit5_above_bound);
    EXPECT_TRUE(r.max_below_sqrt32);
    EXPECT_TRUE(r.failures.empty());
    EXPECT_EQ(r.max_lambda4, QuadSurd::sqrt_of(32));
    EXPECT_GT(r.tree_values_checked, 0);
    EXPECT_GT(r.digit5_values_checked, 0);
    // (5) itself: 5 + 2[0; overline 5] lies above 5 + 2 A_5
    auto five = SftSpec::full(5);
    EXPECT_GE(orbit_value(five, five.parse("5"), CfPotential{}).value, nj_lower_bound(5));
}

// --- windowed cf mode -------------------------------------------------------------

TEST(Windowed, BracketAroundOne) {
    auto lo = windowed_cf_sublevel({1, 2}, 3, Rational(33, 10));
    auto hi = windowed_cf_sublevel({1, 2}, 3, Rational(35, 10));
    EXPECT_LT(lo.dim().upper, 1.0);
    EXPECT_GT(hi.dim().lower, 1.0);
    EXPECT_EQ(lo.in + lo.out + lo.uncertain, 128);
    EXPECT_LE(lo.dim().lower, lo.dim().upper);
    // full shift on {1,2}: every window sits below max f = 1 + 2 B_2 + ... < 3.5
    EXPECT_EQ(hi.out + hi.uncertain, 0);
}

TEST(Windowed, BoundsNestAcrossWindows) {
    for (auto t : {Rational(33, 10), Rational(35, 10)}) {
        auto w3 = windowed_cf_sublevel({1, 2}, 3, t).dim();
        auto w4 = windowed_cf_sublevel({1, 2}, 4, t).dim();
        // both bracket the same quantity
        EXPECT_LE(w3.lower, w4.upper + 1e-12);
        EXPECT_LE(w4.lower, w3.upper + 1e-12);
    }
}

TEST(Windowed, CrossingSearch) {
    auto br = windowed_crossing({1, 2}, 3, Rational(33, 10), Rational(35, 10), 6);
    EXPECT_TRUE(br.separated);
    EXPECT_LT(br.at_below.upper, 1.0);
    EXPECT_GT(br.at_above.lower, 1.0);
    EXPECT_LE(Rational(33, 10), br.t_below);
    EXPECT_LT(br.t_below, br.t_above);
    EXPECT_LE(br.t_above, Rational(35, 10));
}

// --- properties ------------------------------------------------------------------------

TEST(SpectraProperty, RotationInvariance) {
    Rng rng(51);
    auto three = SftSpec::full(3);
    for (int trial = 0; trial < 50; ++trial) {
        Word w;
        int n = static_cast<int>(rng.uniform(1, 7));
        for (int k = 0; k < n; ++k) w.push_back(static_cast<int>(rng.uniform(0, 2)));
        auto v = orbit_value(three, w, CfPotential{}).value;
        for (int k = 1; k < n; ++k) {
            Word r(w.begin() + k, w.end());
            r.insert(r.end(), w.begin(), w.begin() + k);
            EXPECT_EQ(orbit_value(three, r, CfPotential{}).value, v);
        }
    }
}

TEST(SpectraProperty, RandomBundles) {
    for (bool symmetric : {false, true}) {
        Rng rng(symmetric ? 62 : 61);
        for (int trial = 0; trial < 20; ++trial) {
            auto b = random_bundle(rng, symmetric);
            auto rep = phase_transitions(b);
            DimBounds prev_dim, prev_D;
            std::vector<int> prev_kept;
            for (const auto& row : rep.table) {
                EXPECT_GE(row.dim.lower, prev_dim.lower - 1e-12);
                EXPECT_GE(row.D.lower, prev_D.lower - 1e-12);
                EXPECT_LE(row.D.lower, row.dim.upper + 1e-12);
                EXPECT_LE(row.D.upper, row.dim.upper + 1e-12);
                prev_dim = row.dim;
                prev_D = row.D;
                auto fts = sublevel_set(b.sft, b.potential, row.t, b.rates);
                // survivors only grow with t
                for (int v : prev_kept) EXPECT_TRUE(std::binary_search(fts.kept.begin(), fts.kept.end(), v));
                prev_kept = fts.kept;
                auto lag = lagrange_finite_type(fts, b.potential, 4);
                auto mk = markov_finite_type(fts, b.potential, 4);
                EXPECT_TRUE(subset(lag, mk));
                for (const auto& e : mk.entries) EXPECT_LE(e.value, QuadSurd::from_rational(row.t));
            }
            if (rep.a.status == CrossingStatus::found && rep.a_tilde.status == CrossingStatus::found) {
                EXPECT_LE(rep.a.t, rep.a_tilde.t);
            }
            if (symmetric) {
                EXPECT_EQ(rep.a.status, rep.a_tilde.status);
                if (rep.a.status == CrossingStatus::found) {
                    EXPECT_EQ(rep.a.t, rep.a_tilde.t);
                }
            }
        }
    }
}

TEST(SpectraProperty, DeterministicUnderThreadCap) {
    auto run = [] {
        auto s = spectrum_sample(SftSpec::full(3), CfPotential{}, 6);
        return io::sample_json(s).dump();
    };
    setenv("SPECTRA_LAB_THREADS", "1", 1);
    std::string one = run();
    setenv("SPECTRA_LAB_THREADS", "5", 1);
    std::string five = run();
    unsetenv("SPECTRA_LAB_THREADS");
    EXPECT_EQ(one, five);
}
