#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <compare>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "spectra_lab/error.hpp"

namespace spectra_lab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using BigFloat = boost::multiprecision::cpp_bin_float_50;

inline int sign_of(const BigInt& x) { return x.sign(); }

inline BigInt big_gcd(BigInt a, BigInt b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        BigInt t = a % b;
        a = std::move(b);
        b = std::move(t);
    }
    return a;
}

inline BigInt isqrt(const BigInt& n) {
    require(n >= 0, errc::input, "square root of a negative integer");
    return boost::multiprecision::sqrt(n);
}

inline bool is_square(const BigInt& n) {
    if (n < 0) return false;
    BigInt s = isqrt(n);
    return s * s == n;
}

namespace detail {

inline std::pair<BigInt, BigInt> square_free_split_uncached(BigInt n) {
    BigInt s = 1, f = 1;
    // Trial division up to the cube root: what remains is 1, p, p^2 or p*q.
    for (BigInt p = 2; p * p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        for (int k = 0; k < e / 2; ++k) s *= p;
        if (e % 2) f *= p;
    }
    if (is_square(n)) s *= isqrt(n);
    else f *= n;
    return {s, f};
}

} // namespace detail

// n = s^2 * f with f square-free; returns {s, f}.  Periodic-orbit values keep
// hitting the same discriminants, so results are memoised per thread.
inline std::pair<BigInt, BigInt> square_free_split(const BigInt& n) {
    require(n >= 0, errc::input, "radicand must be non-negative");
    if (n == 0) return {0, 0};
    thread_local std::map<BigInt, std::pair<BigInt, BigInt>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    auto out = detail::square_free_split_uncached(n);
    if (cache.size() > 200000) cache.clear();
    cache.emplace(n, out);
    return out;
}

// Exact element (p + q*sqrt(d)) / r of a real quadratic field, kept in lowest
// terms with r > 0 and d square-free (d = 0 for rationals).
class QuadSurd {
public:
    QuadSurd() : p_(0), q_(0), r_(1), d_(0) {}
    QuadSurd(long long n) : p_(n), q_(0), r_(1), d_(0) {} // NOLINT(google-explicit-constructor)

    QuadSurd(BigInt p, BigInt q, BigInt r, BigInt d) : p_(std::move(p)), q_(std::move(q)), r_(std::move(r)), d_(std::move(d)) {
        require(r_ != 0, errc::input, "surd denominator is zero");
        require(d_ >= 0, errc::input, "surd radicand is negative");
        if (d_ != 0 && q_ != 0) {
            auto [s, f] = square_free_split(d_);
            q_ *= s;
            d_ = f;
        }
        normalize();
    }

    static QuadSurd from_rational(const Rational& x) {
        return QuadSurd(numerator(x), 0, denominator(x), 0);
    }
    static QuadSurd sqrt_of(const BigInt& n) { return QuadSurd(0, 1, 1, n); }

    const BigInt& p() const noexcept { return p_; }
    const BigInt& q() const noexcept { return q_; }
    const BigInt& r() const noexcept { return r_; }
    const BigInt& d() const noexcept { return d_; }
    bool is_rational() const noexcept { return q_ == 0; }

    Rational rational_part() const { return Rational(p_, r_); }
    Rational irrational_coefficient() const { return Rational(q_, r_); }

    QuadSurd conjugate() const { return unchecked(p_, -q_, r_, d_); }

    BigFloat to_big_float() const {
        BigFloat v = BigFloat(p_);
        if (q_ != 0) v += BigFloat(q_) * boost::multiprecision::sqrt(BigFloat(d_));
        return v / BigFloat(r_);
    }
    double to_double() const { return static_cast<double>(to_big_float()); }

    // Outward-rounded double enclosure.
    std::pair<double, double> enclosure() const {
        double v = to_double();
        return {std::nextafter(v, -std::numeric_limits<double>::infinity()),
                std::nextafter(v, std::numeric_limits<double>::infinity())};
    }

    BigInt floor() const {
        BigInt guess(static_cast<long long>(std::floor(to_double())));
        while (*this < QuadSurd(guess, 0, 1, 0)) guess -= 1;
        while (!(*this < QuadSurd(guess + 1, 0, 1, 0))) guess += 1;
        return guess;
    }

    friend QuadSurd operator-(const QuadSurd& a) { return unchecked(-a.p_, -a.q_, a.r_, a.d_); }

    friend QuadSurd operator+(const QuadSurd& a, const QuadSurd& b) {
        BigInt d = common_field(a, b);
        return unchecked(a.p_ * b.r_ + b.p_ * a.r_, a.q_ * b.r_ + b.q_ * a.r_, a.r_ * b.r_, d);
    }
    friend QuadSurd operator-(const QuadSurd& a, const QuadSurd& b) { return a + (-b); }
    friend QuadSurd operator*(const QuadSurd& a, const QuadSurd& b) {
        BigInt d = common_field(a, b);
        return unchecked(a.p_ * b.p_ + a.q_ * b.q_ * d, a.p_ * b.q_ + a.q_ * b.p_, a.r_ * b.r_, d);
    }
    QuadSurd reciprocal() const {
        BigInt norm = p_ * p_ - q_ * q_ * d_;
        require(norm != 0, errc::input, "division by zero surd");
        return unchecked(r_ * p_, -r_ * q_, norm, d_);
    }
    friend QuadSurd operator/(const QuadSurd& a, const QuadSurd& b) { return a * b.reciprocal(); }

    QuadSurd& operator+=(const QuadSurd& b) { return *this = *this + b; }
    QuadSurd& operator-=(const QuadSurd& b) { return *this = *this - b; }
    QuadSurd& operator*=(const QuadSurd& b) { return *this = *this * b; }
    QuadSurd& operator/=(const QuadSurd& b) { return *this = *this / b; }

    int sign() const { return sign_of_form(p_, q_, d_); }

    // Exact comparison, also across different quadratic fields.
    friend std::strong_ordering operator<=>(const QuadSurd& a, const QuadSurd& b) {
        int s;
        if (a.q_ == 0 || b.q_ == 0 || a.d_ == b.d_) {
            s = (a - b).sign();
        } else {
            // sign of A + B sqrt(d1) + C sqrt(d2)
            BigInt A = a.p_ * b.r_ - b.p_ * a.r_, B = a.q_ * b.r_, C = -(b.q_ * a.r_);
            int s1 = sign_of_form(A, B, a.d_), s2 = sign_of(C);
            if (s1 == 0) s = s2;
            else if (s1 == s2) s = s1;
            else {
                // compare (A + B sqrt(d1))^2 with C^2 d2
                int mag = sign_of_form(A * A + B * B * a.d_ - C * C * b.d_, 2 * A * B, a.d_);
                s = mag > 0 ? s1 : (mag < 0 ? s2 : 0);
            }
        }
        return s < 0 ? std::strong_ordering::less : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
    friend bool operator==(const QuadSurd& a, const QuadSurd& b) {
        return a.p_ == b.p_ && a.q_ == b.q_ && a.r_ == b.r_ && a.d_ == b.d_;
    }

    // e.g. "(-1+sqrt(5))/2", "2*sqrt(2)", "13/10"
    std::string to_string() const {
        std::string num;
        int terms = 0;
        if (p_ != 0 || q_ == 0) {
            num = p_.str();
            ++terms;
        }
        if (q_ != 0) {
            std::string rad = "sqrt(" + d_.str() + ")";
            BigInt aq = q_ < 0 ? BigInt(-q_) : q_;
            std::string mag = aq == 1 ? rad : aq.str() + "*" + rad;
            if (terms > 0) num += (q_ < 0 ? "-" : "+") + mag;
            else num = (q_ < 0 ? "-" : "") + mag;
            ++terms;
        }
        if (r_ == 1) return num;
        return (terms > 1 ? "(" + num + ")" : num) + "/" + r_.str();
    }

private:
    struct Raw {};
    QuadSurd(Raw, BigInt p, BigInt q, BigInt r, BigInt d) : p_(std::move(p)), q_(std::move(q)), r_(std::move(r)), d_(std::move(d)) {
        normalize();
    }
    // d is already square-free.
    static QuadSurd unchecked(BigInt p, BigInt q, BigInt r, BigInt d) {
        return QuadSurd(Raw{}, std::move(p), std::move(q), std::move(r), std::move(d));
    }

    static BigInt common_field(const QuadSurd& a, const QuadSurd& b) {
        if (a.q_ == 0) return b.d_;
        if (b.q_ == 0) return a.d_;
        require(a.d_ == b.d_, errc::input, "surds from different quadratic fields");
        return a.d_;
    }

    static int sign_of_form(const BigInt& p, const BigInt& q, const BigInt& d) {
        int sp = sign_of(p), sq = (d == 0) ? 0 : sign_of(q);
        if (sq == 0) return sp;
        if (sp == 0 || sp == sq) return sq;
        BigInt lhs = p * p, rhs = q * q * d;
        if (lhs == rhs) return 0;
        return lhs > rhs ? sp : sq;
    }

    void normalize() {
        require(r_ != 0, errc::input, "surd denominator is zero");
        if (d_ == 1) {
            p_ += q_;
            q_ = 0;
        }
        if (q_ == 0 || d_ == 0) {
            q_ = 0;
            d_ = 0;
        }
        if (r_ < 0) {
            p_ = -p_;
            q_ = -q_;
            r_ = -r_;
        }
        BigInt g = big_gcd(big_gcd(p_, q_), r_);
        if (g > 1) {
            p_ /= g;
            q_ /= g;
            r_ /= g;
        }
    }

    BigInt p_, q_, r_, d_;
};

} // namespace spectra_lab
