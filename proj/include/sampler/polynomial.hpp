#pragma once

#include "sampler/rational.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace sampler {

/// Dense polynomial over exact rationals, coefficient i multiplies x^i.
struct RationalPoly {
    std::vector<Rational> c;

    RationalPoly() = default;
    explicit RationalPoly(std::vector<Rational> coeffs) : c(std::move(coeffs)) { trim(); }

    static RationalPoly constant(const Rational& v) { return RationalPoly({v}); }
    static RationalPoly monomial(int degree, const Rational& v = 1) {
        std::vector<Rational> cs(degree + 1, Rational(0));
        cs[degree] = v;
        return RationalPoly(std::move(cs));
    }

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    Rational coeff(int i) const { return (i >= 0 && i < static_cast<int>(c.size())) ? c[i] : Rational(0); }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }

    Rational eval(const Rational& x) const {
        Rational r = 0;
        for (int i = degree(); i >= 0; --i) r = r * x + c[i];
        return r;
    }
    double eval(double x) const {
        double r = 0;
        for (int i = degree(); i >= 0; --i) r = r * x + to_double(c[i]);
        return r;
    }

    /// p(-x)
    RationalPoly reflected() const {
        RationalPoly r = *this;
        for (size_t i = 1; i < r.c.size(); i += 2) r.c[i] = -r.c[i];
        return r;
    }
};

inline RationalPoly operator+(const RationalPoly& a, const RationalPoly& b) {
    std::vector<Rational> r(std::max(a.c.size(), b.c.size()), Rational(0));
    for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
    return RationalPoly(std::move(r));
}

inline RationalPoly operator-(const RationalPoly& a, const RationalPoly& b) {
    std::vector<Rational> r(std::max(a.c.size(), b.c.size()), Rational(0));
    for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r[i] -= b.c[i];
    return RationalPoly(std::move(r));
}

inline RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
    if (a.is_zero() || b.is_zero()) return RationalPoly();
    std::vector<Rational> r(a.c.size() + b.c.size() - 1, Rational(0));
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    return RationalPoly(std::move(r));
}

inline RationalPoly operator*(const Rational& s, const RationalPoly& p) {
    RationalPoly r = p;
    for (auto& x : r.c) x *= s;
    r.trim();
    return r;
}

/// Euclidean division: returns (quotient, remainder) with deg(rem) < deg(div).
inline std::pair<RationalPoly, RationalPoly> divmod(const RationalPoly& p, const RationalPoly& d) {
    if (d.is_zero()) throw std::invalid_argument("polynomial division by zero");
    std::vector<Rational> rem = p.c;
    int dq = static_cast<int>(rem.size()) - static_cast<int>(d.c.size());
    if (dq < 0) return {RationalPoly(), p};
    std::vector<Rational> quo(dq + 1, Rational(0));
    for (int k = dq; k >= 0; --k) {
        Rational f = rem[k + d.degree()] / d.c.back();
        quo[k] = f;
        for (int j = 0; j <= d.degree(); ++j) rem[k + j] -= f * d.c[j];
    }
    rem.resize(d.degree() >= 0 ? d.degree() : 0);
    return {RationalPoly(std::move(quo)), RationalPoly(std::move(rem))};
}

/// ((1 - x)/2)^e
inline RationalPoly half_one_minus_x_pow(int e) {
    RationalPoly base({Rational(1, 2), Rational(-1, 2)});
    RationalPoly r = RationalPoly::constant(1);
    for (int i = 0; i < e; ++i) r = r * base;
    return r;
}

}  // namespace sampler
