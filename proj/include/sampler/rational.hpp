#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sampler {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    BigInt r = 1;
    for (int i = 0; i < k; ++i) {
        r *= (n - i);
        r /= (i + 1);
    }
    return r;
}

/// 2^e as an exact rational, e may be negative.
inline Rational pow2(int e) {
    BigInt p = BigInt(1) << static_cast<unsigned>(e < 0 ? -e : e);
    return e < 0 ? Rational(1, p) : Rational(p);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Shortest round-trip decimal formatting for doubles.
inline std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Formats as "p/q", or just "p" for integers.
inline std::string format_rational(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

/// Accepts "p/q", integers, and plain decimals ("0.125").
inline Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        BigInt p(text.substr(0, slash)), q(text.substr(slash + 1));
        if (q == 0) throw std::invalid_argument("rational with zero denominator: " + text);
        return Rational(p, q);
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(BigInt(text));
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    bool neg = !digits.empty() && digits[0] == '-';
    std::string mag = neg ? digits.substr(1) : digits;
    size_t nz = mag.find_first_not_of('0');  // avoid the octal reading of "0125"
    mag = (nz == std::string::npos) ? "0" : mag.substr(nz);
    int frac_len = static_cast<int>(text.size() - dot - 1);
    BigInt q = 1;
    for (int i = 0; i < frac_len; ++i) q *= 10;
    BigInt p(mag);
    if (neg) p = -p;
    return Rational(p, q);
}

}  // namespace sampler
