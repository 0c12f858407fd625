#pragma once

#include <cctype>
#include <cmath>
#include <string>

#include "spectra_lab/error.hpp"
#include "spectra_lab/quad_surd.hpp"

namespace spectra_lab {

// Exact value of a finite double.
inline Rational rational_from_double(double x) {
    require(std::isfinite(x), errc::input, "non-finite number");
    if (x == 0.0) return Rational(0);
    int exp = 0;
    double m = std::frexp(x, &exp); // x = m * 2^exp, 0.5 <= |m| < 1
    long long mant = static_cast<long long>(std::ldexp(m, 53));
    exp -= 53;
    Rational out(mant);
    BigInt pow2 = BigInt(1) << std::abs(exp);
    return exp >= 0 ? Rational(out * pow2) : Rational(out / pow2);
}

// "3", "-7/10", "0.125", "1e-3".
inline Rational parse_rational(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    require(!s.empty(), errc::input, "empty number");
    auto slash = s.find('/');
    auto parse_int = [&](const std::string& t) {
        require(!t.empty(), errc::input, "malformed number '" + text + "'");
        std::size_t k = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        require(k < t.size(), errc::input, "malformed number '" + text + "'");
        for (std::size_t i = k; i < t.size(); ++i)
            require(std::isdigit(static_cast<unsigned char>(t[i])) != 0, errc::input, "malformed number '" + text + "'");
        // cpp_int reads a leading 0 as octal
        std::size_t z = k;
        while (z + 1 < t.size() && t[z] == '0') ++z;
        BigInt v(t.substr(z));
        return t[0] == '-' ? BigInt(-v) : v;
    };
    if (slash != std::string::npos) {
        BigInt den = parse_int(s.substr(slash + 1));
        require(den != 0, errc::input, "zero denominator in '" + text + "'");
        return Rational(parse_int(s.substr(0, slash)), den);
    }
    long long exponent = 0;
    auto e = s.find_first_of("eE");
    if (e != std::string::npos) {
        exponent = static_cast<long long>(parse_int(s.substr(e + 1)));
        s = s.substr(0, e);
    }
    bool neg = !s.empty() && s[0] == '-';
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) s = s.substr(1);
    auto dot = s.find('.');
    std::string digits = s;
    if (dot != std::string::npos) {
        digits = s.substr(0, dot) + s.substr(dot + 1);
        exponent -= static_cast<long long>(s.size() - dot - 1);
    }
    if (digits.empty()) digits = "0";
    Rational value(parse_int(digits));
    BigInt ten = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::llabs(exponent)));
    value = exponent >= 0 ? Rational(value * ten) : Rational(value / ten);
    return neg ? Rational(-value) : value;
}

inline std::string rational_to_string(const Rational& x) {
    if (denominator(x) == 1) return numerator(x).str();
    return numerator(x).str() + "/" + denominator(x).str();
}

inline double to_double(const Rational& x) { return static_cast<double>(BigFloat(numerator(x)) / BigFloat(denominator(x))); }

} // namespace spectra_lab
