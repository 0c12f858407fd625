#include <gtest/gtest.h>

#include <cmath>

#include "spectra_lab/gauss.hpp"
#include "spectra_lab/random_models.hpp"
#include "spectra_lab/rational.hpp"

using namespace spectra_lab;

namespace {
QuadSurd S(long long p, long long q, long long r, long long d) { return QuadSurd(p, q, r, d); }
} // namespace

TEST(QuadSurd, CanonicalForm) {
    auto x = S(2, 2, 4, 8); // (2 + 2 sqrt 8)/4 = (1 + 2 sqrt 2)/2
    EXPECT_EQ(x.p(), 1);
    EXPECT_EQ(x.q(), 2);
    EXPECT_EQ(x.r(), 2);
    EXPECT_EQ(x.d(), 2);
    auto y = S(3, 5, -6, 0); // rational -1/2
    EXPECT_TRUE(y.is_rational());
    EXPECT_EQ(y.p(), -1);
    EXPECT_EQ(y.r(), 2);
    EXPECT_EQ(y.d(), 0);
    EXPECT_EQ(S(1, 3, 1, 9), QuadSurd(10));
    EXPECT_THROW(S(1, 1, 0, 2), error);
    EXPECT_THROW(S(1, 1, 1, -2), error);
}

TEST(QuadSurd, Arithmetic) {
    auto phi = S(1, 1, 2, 5);
    EXPECT_EQ(phi * phi, phi + QuadSurd(1));
    EXPECT_EQ(phi.reciprocal(), phi - QuadSurd(1));
    EXPECT_EQ((S(0, 1, 1, 2) * S(0, 1, 1, 2)), QuadSurd(2));
    EXPECT_THROW(S(0, 1, 1, 2) + S(0, 1, 1, 3), error);
    EXPECT_EQ(S(0, 1, 1, 2) + QuadSurd(1), S(1, 1, 1, 2));
}

TEST(QuadSurd, ComparisonAcrossFields) {
    // sqrt 2 + sqrt 3 vs pi-ish values, and close calls
    EXPECT_LT(S(0, 1, 1, 2), S(0, 1, 1, 3));
    EXPECT_LT(S(0, 1, 5, 221), S(0, 2, 1, 2) + QuadSurd::from_rational(Rational(1, 5))); // 2.9732 < 3.0284
    EXPECT_GT(S(0, 1, 5, 221), S(0, 2, 1, 2));
    // 1 + sqrt 2 = 2.41421356 vs sqrt(5.8284271) -> nearly equal but different
    EXPECT_LT(S(0, 1, 1, 5), S(1, 1, 1, 2));
    // sqrt(2)+1 vs sqrt(3+2 sqrt 2) would be equal; here compare 3 + 2sqrt2 with (1+sqrt2)^2 exactly
    EXPECT_EQ(S(1, 1, 1, 2) * S(1, 1, 1, 2), S(3, 2, 1, 2));
    // sqrt 2 against tight rational brackets
    EXPECT_GT(S(0, 1, 1, 2), QuadSurd::from_rational(Rational(1414213562, 1000000000)));
    EXPECT_LT(S(0, 1, 1, 2), QuadSurd::from_rational(Rational(1414213563, 1000000000)));
    EXPECT_GT(S(0, 1, 1, 10), S(0, 2, 1, 2));
    // 4 sqrt 30 / 7 = 3.12984 against (3 + 20 sqrt 221)/100 = 3.00321
    EXPECT_GT(S(0, 4, 7, 30), S(3, 20, 100, 221));
}

TEST(QuadSurd, Rendering) {
    EXPECT_EQ(S(-1, 1, 2, 5).to_string(), "(-1+sqrt(5))/2");
    EXPECT_EQ(S(0, 2, 1, 2).to_string(), "2*sqrt(2)");
    EXPECT_EQ(S(0, 1, 5, 221).to_string(), "sqrt(221)/5");
    EXPECT_EQ(QuadSurd::from_rational(Rational(13, 10)).to_string(), "13/10");
    EXPECT_EQ(S(1, -1, 1, 21).to_string(), "1-sqrt(21)");
}

TEST(QuadSurd, FloorAndEnclosure) {
    EXPECT_EQ(S(0, 1, 1, 2).floor(), 1);
    EXPECT_EQ(S(0, -1, 1, 2).floor(), -2);
    EXPECT_EQ(QuadSurd(3).floor(), 3);
    auto [lo, hi] = S(0, 1, 1, 2).enclosure();
    EXPECT_LT(lo, std::sqrt(2.0));
    EXPECT_GT(hi, std::sqrt(2.0));
}

TEST(Gauss, PeriodicValues) {
    EXPECT_EQ(periodic_value({{}, {1}}), S(-1, 1, 2, 5));
    EXPECT_EQ(periodic_value({{}, {1, 4}}), S(-4, 1, 2, 32));
    EXPECT_EQ(periodic_value({{}, {1, 4}}), S(-2, 2, 1, 2));
    EXPECT_EQ(periodic_value({{}, {4, 1}}), S(-1, 1, 2, 2));
    EXPECT_EQ(periodic_value({{}, {2}}), S(-1, 1, 1, 2));
    // [0; 1, overline{2}] = 1/(1 + sqrt2 - 1) = 1/sqrt 2
    EXPECT_EQ(periodic_value({{1}, {2}}), S(0, 1, 2, 2));
    EXPECT_THROW(periodic_value({{}, {}}), error);
    EXPECT_THROW(periodic_value({{}, {0, 1}}), error);
}

TEST(Gauss, ExtremalValues) {
    auto [A4, B4] = extremal_values(4);
    EXPECT_EQ(A4, S(-1, 1, 2, 2));
    EXPECT_EQ(B4, S(-2, 2, 1, 2));
    auto [A1, B1] = extremal_values(1);
    EXPECT_EQ(A1, B1);
    EXPECT_EQ(A1, S(-1, 1, 2, 5));
    EXPECT_EQ(extremal_values(5).second, S(-5, 1, 2, 45));
}

TEST(Gauss, CylinderIntervals) {
    EXPECT_EQ(cylinder_interval({1}), (RationalInterval{Rational(1, 2), Rational(1)}));
    EXPECT_EQ(cylinder_interval({2}), (RationalInterval{Rational(1, 3), Rational(1, 2)}));
    EXPECT_EQ(cylinder_interval({1, 2}), (RationalInterval{Rational(2, 3), Rational(3, 4)}));
}

TEST(Gauss, CfExpand) {
    auto a = cf_expand(S(-1, 1, 1, 2), 5);
    EXPECT_EQ(a.digits, (std::vector<int>{2, 2, 2, 2, 2}));
    EXPECT_TRUE(a.periodic);
    EXPECT_EQ(a.sequence.period, (std::vector<int>{2}));
    auto g = cf_expand(S(-1, 1, 2, 5), 4);
    EXPECT_EQ(g.digits, (std::vector<int>{1, 1, 1, 1}));
    auto b = cf_expand(extremal_values(4).second, 6);
    EXPECT_EQ(b.sequence.pre, std::vector<int>{});
    EXPECT_EQ(b.sequence.period, (std::vector<int>{1, 4}));
    EXPECT_THROW(cf_expand(QuadSurd::from_rational(Rational(3, 7)), 10), error);
    EXPECT_THROW(cf_expand(QuadSurd(2), 3), error);
}

TEST(Rational, Parsing) {
    EXPECT_EQ(parse_rational("13/10"), Rational(13, 10));
    EXPECT_EQ(parse_rational("1.3"), Rational(13, 10));
    EXPECT_EQ(parse_rational("-0.125"), Rational(-1, 8));
    EXPECT_EQ(parse_rational("1e-3"), Rational(1, 1000));
    EXPECT_EQ(parse_rational("2.5E2"), Rational(250));
    EXPECT_EQ(parse_rational("0125"), Rational(125));
    EXPECT_EQ(parse_rational("-007/010"), Rational(-7, 10));
    EXPECT_THROW(parse_rational("1/0"), error);
    EXPECT_THROW(parse_rational("abc"), error);
    EXPECT_EQ(rational_from_double(0.75), Rational(3, 4));
}

// --- properties --------------------------------------------------------------

TEST(GaussProperty, RoundTripRandomSurds) {
    Rng rng(31);
    int done = 0;
    while (done < 50) {
        long long d = rng.uniform(2, 60);
        if (is_square(d)) continue;
        QuadSurd x(rng.uniform(-20, 20), rng.uniform(1, 5) * (rng.uniform(0, 1) ? 1 : -1), rng.uniform(1, 30), d);
        x = x - QuadSurd(x.floor(), 0, 1, 0);
        if (x.sign() <= 0 || x.is_rational()) continue;
        auto e = cf_expand(x, 400);
        ASSERT_TRUE(e.periodic) << x.to_string();
        EXPECT_EQ(periodic_value(e.sequence), x) << x.to_string();
        ++done;
    }
}

TEST(GaussProperty, CylinderNestingAndLength) {
    Rng rng(32);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> w;
        int n = static_cast<int>(rng.uniform(1, 12));
        for (int k = 0; k < n; ++k) w.push_back(static_cast<int>(rng.uniform(1, 9)));
        auto c = continuants(w);
        auto I = cylinder_interval(w);
        EXPECT_EQ(I.hi - I.lo, Rational(1, c.q * (c.q + c.q_prev)));
        auto child = w;
        child.push_back(static_cast<int>(rng.uniform(1, 9)));
        auto J = cylinder_interval(child);
        EXPECT_LE(I.lo, J.lo);
        EXPECT_LE(J.hi, I.hi);
    }
}

TEST(GaussProperty, ExtremalQuadratic) {
    for (int N = 1; N <= 40; ++N) {
        auto [A, B] = extremal_values(N);
        EXPECT_EQ(B * B + QuadSurd(N) * B - QuadSurd(N), QuadSurd(0));
        EXPECT_EQ(A, B / QuadSurd(N));
        EXPECT_EQ(A, periodic_value({{}, {N, 1}}));
        EXPECT_EQ(B, periodic_value({{}, {1, N}}));
        std::vector<int> digits;
        for (int k = 1; k <= N; ++k) digits.push_back(k);
        auto [lo, hi] = cantor_hull(digits);
        EXPECT_EQ(lo, A);
        EXPECT_EQ(hi, B);
    }
}
