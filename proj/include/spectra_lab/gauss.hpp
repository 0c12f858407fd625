#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "spectra_lab/error.hpp"
#include "spectra_lab/quad_surd.hpp"

namespace spectra_lab {

// [0; pre..., overline{period...}]
struct CfSequence {
    std::vector<int> pre;
    std::vector<int> period;

    friend bool operator==(const CfSequence&, const CfSequence&) = default;
};

// Continuants of [0; a_1, ..., a_n]: p_n, p_{n-1}, q_n, q_{n-1}.
struct Continuants {
    BigInt p = 0, p_prev = 1, q = 1, q_prev = 0;

    void push(long long a) {
        BigInt np = a * p + p_prev, nq = a * q + q_prev;
        p_prev = std::move(p);
        q_prev = std::move(q);
        p = std::move(np);
        q = std::move(nq);
    }
};

inline void check_digits(const std::vector<int>& digits, const char* what) {
    for (int a : digits) require(a >= 1, errc::input, std::string(what) + ": partial quotients must be positive");
}

inline Continuants continuants(const std::vector<int>& digits) {
    check_digits(digits, "continuants");
    Continuants c;
    for (int a : digits) c.push(a);
    return c;
}

// [0; overline{c}] as the positive root of q_{k-1} y^2 + (q_k - p_{k-1}) y - p_k = 0.
inline QuadSurd purely_periodic_value(const std::vector<int>& period) {
    require(!period.empty(), errc::input, "period must be non-empty");
    check_digits(period, "period");
    Continuants c = continuants(period);
    BigInt a = c.q_prev, b = c.q - c.p_prev, k = -c.p;
    require(a != 0, errc::input, "degenerate quadratic for periodic expansion");
    BigInt disc = b * b - 4 * a * k;
    return QuadSurd(-b, 1, 2 * a, disc);
}

// Moebius action x -> (p + p' x)/(q + q' x) of a prefix on a surd.
inline QuadSurd apply_prefix(const std::vector<int>& pre, const QuadSurd& x) {
    if (pre.empty()) return x;
    Continuants c = continuants(pre);
    QuadSurd num = QuadSurd(c.p, 0, 1, 0) + QuadSurd(c.p_prev, 0, 1, 0) * x;
    QuadSurd den = QuadSurd(c.q, 0, 1, 0) + QuadSurd(c.q_prev, 0, 1, 0) * x;
    return num / den;
}

inline QuadSurd periodic_value(const CfSequence& cf) {
    check_digits(cf.pre, "preperiod");
    return apply_prefix(cf.pre, purely_periodic_value(cf.period));
}

// A_N = [0; overline{N,1}], B_N = [0; overline{1,N}] = (-N + sqrt(N^2+4N))/2,
// the minimum and maximum of C(N).
inline std::pair<QuadSurd, QuadSurd> extremal_values(int n) {
    require(n >= 1, errc::input, "N must be at least 1");
    BigInt N = n;
    QuadSurd B(-N, 1, 2, N * N + 4 * N);
    QuadSurd A = B / QuadSurd(N, 0, 1, 0);
    return {A, B};
}

// Hull of C(D) for a digit set D: [[0; overline{M,m}], [0; overline{m,M}]].
inline std::pair<QuadSurd, QuadSurd> cantor_hull(const std::vector<int>& digits) {
    require(!digits.empty(), errc::input, "digit set is empty");
    check_digits(digits, "digit set");
    int m = *std::min_element(digits.begin(), digits.end());
    int M = *std::max_element(digits.begin(), digits.end());
    return {purely_periodic_value({M, m}), purely_periodic_value({m, M})};
}

struct RationalInterval {
    Rational lo, hi;
    friend bool operator==(const RationalInterval&, const RationalInterval&) = default;
};

// Closed interval of all x in [0,1] whose expansion starts with w.
inline RationalInterval cylinder_interval(const std::vector<int>& w) {
    Continuants c = continuants(w);
    Rational a(c.p, c.q), b(c.p + c.p_prev, c.q + c.q_prev);
    if (b < a) std::swap(a, b);
    return {a, b};
}

// First n partial quotients of x in (0,1), with the detected period when x is
// a quadratic irrational and the expansion closes up within n steps.
struct CfExpansion {
    std::vector<int> digits;
    bool periodic = false;
    CfSequence sequence; // valid when periodic
};

inline CfExpansion cf_expand(const QuadSurd& x, int n) {
    require(n >= 1, errc::input, "digit count must be at least 1");
    require(x.sign() > 0 && x < QuadSurd(1), errc::input, "cf_expand needs 0 < x < 1");
    CfExpansion out;
    std::map<std::tuple<BigInt, BigInt, BigInt>, int> seen; // complete quotient -> index
    QuadSurd y = x.reciprocal();
    for (int k = 0; k < n; ++k) {
        if (!out.periodic && !y.is_rational()) {
            auto key = std::make_tuple(y.p(), y.q(), y.r());
            auto it = seen.find(key);
            if (it != seen.end()) {
                out.periodic = true;
                int start = it->second;
                out.sequence.pre.assign(out.digits.begin(), out.digits.begin() + start);
                out.sequence.period.assign(out.digits.begin() + start, out.digits.end());
            } else {
                seen.emplace(key, k);
            }
        }
        BigInt a = y.floor();
        require(a <= std::numeric_limits<int>::max(), errc::input, "partial quotient too large");
        out.digits.push_back(static_cast<int>(a));
        QuadSurd frac = y - QuadSurd(a, 0, 1, 0);
        if (k + 1 == n) break;
        if (frac.sign() == 0) fail(errc::input, "rational input: expansion terminates after " + std::to_string(k + 1) + " digits");
        y = frac.reciprocal();
    }
    return out;
}

} // namespace spectra_lab
