#pragma once

#include "sampler/rational.hpp"

#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace sampler {

/// Finite refinement filter a_{n1},...,a_{n2} with sum 2.
/// Coefficients are kept as doubles; GP masks with integer h-n additionally
/// carry the exact rational values.
struct Mask {
    std::vector<double> coeffs;
    int offset = 0;
    std::vector<Rational> exact;  // empty when only floating point is available
    std::optional<int> order_n;
    std::optional<double> shape_h;

    int size() const { return static_cast<int>(coeffs.size()); }
    int first_index() const { return offset; }
    int last_index() const { return offset + size() - 1; }
    bool is_exact() const { return !exact.empty(); }

    double sum() const {
        double s = 0;
        for (double c : coeffs) s += c;
        return s;
    }

    /// True for the binomial (B-spline) filter 2^-n C(n+1,k), i.e. h = n.
    bool is_bspline() const {
        if (order_n && shape_h) return *shape_h == static_cast<double>(*order_n);
        return false;
    }
};

inline Mask make_mask(std::vector<Rational> exact, int offset) {
    Mask m;
    m.exact = std::move(exact);
    m.offset = offset;
    m.coeffs.reserve(m.exact.size());
    for (const auto& r : m.exact) m.coeffs.push_back(to_double(r));
    return m;
}

/// GP refinement mask a_k = 2^-h [ C(n+1,k) + 4(2^(h-n)-1) C(n-1,k-1) ],
/// k = 0..n+1.  Exact rationals when h-n is an integer, doubles otherwise.
inline Mask gp_mask(int n, double h) {
    if (n < 2) throw std::invalid_argument("gp_mask: n must be >= 2");
    if (!(h > n - 1)) throw std::invalid_argument("gp_mask: h must be > n-1");
    Mask m;
    m.offset = 0;
    m.order_n = n;
    m.shape_h = h;
    double hn = h - n;
    bool exact = (h == std::floor(h));
    if (exact) {
        Rational g = pow2(static_cast<int>(hn));
        Rational scale = pow2(-static_cast<int>(h));
        for (int k = 0; k <= n + 1; ++k) {
            Rational c = Rational(binomial(n + 1, k)) + 4 * (g - 1) * Rational(binomial(n - 1, k - 1));
            m.exact.push_back(c * scale);
            m.coeffs.push_back(to_double(m.exact.back()));
        }
    } else {
        double g = std::exp2(hn);
        double scale = std::exp2(-h);
        for (int k = 0; k <= n + 1; ++k) {
            double c = static_cast<double>(binomial(n + 1, k)) +
                       4.0 * (g - 1.0) * static_cast<double>(binomial(n - 1, k - 1));
            m.coeffs.push_back(c * scale);
        }
    }
    return m;
}

/// m(xi) = 1/2 sum_k a_k e^{-i k xi}, indices including the offset.
inline std::complex<double> mask_symbol(const Mask& m, double xi) {
    if (m.coeffs.empty()) throw std::invalid_argument("mask_symbol: empty mask");
    std::complex<double> s = 0;
    for (int i = 0; i < m.size(); ++i) {
        double k = static_cast<double>(m.offset + i);
        s += m.coeffs[i] * std::exp(std::complex<double>(0.0, -k * xi));
    }
    return 0.5 * s;
}

/// Text record: `n h offset c0 c1 ...` with exact fractions when available.
inline std::string mask_to_record(const Mask& m) {
    std::ostringstream os;
    os << (m.order_n ? std::to_string(*m.order_n) : "-") << ' '
       << (m.shape_h ? format_double(*m.shape_h) : "-") << ' ' << m.offset;
    if (m.is_exact()) {
        for (const auto& c : m.exact) os << ' ' << format_rational(c);
    } else {
        for (double c : m.coeffs) os << ' ' << format_double(c);
    }
    return os.str();
}

inline Mask mask_from_record(const std::string& record) {
    std::istringstream is(record);
    std::string ntok, htok;
    int offset;
    if (!(is >> ntok >> htok >> offset)) throw std::invalid_argument("bad mask record: " + record);
    Mask m;
    m.offset = offset;
    if (ntok != "-") m.order_n = std::stoi(ntok);
    if (htok != "-") m.shape_h = std::stod(htok);
    std::string tok;
    bool exact = true;
    std::vector<Rational> ex;
    while (is >> tok) {
        if (tok.find('/') != std::string::npos) {
            Rational r = parse_rational(tok);
            if (exact) ex.push_back(r);
            m.coeffs.push_back(to_double(r));
        } else {
            if (exact && tok.find_first_of("eE") == std::string::npos) {
                try {
                    ex.push_back(parse_rational(tok));
                } catch (const std::exception&) {
                    exact = false;
                }
            } else {
                exact = false;
            }
            m.coeffs.push_back(std::stod(tok));
        }
    }
    if (m.coeffs.empty()) throw std::invalid_argument("mask record has no coefficients");
    if (exact) m.exact = std::move(ex);
    return m;
}

}  // namespace sampler
