#pragma once

#include "sampler/cascade.hpp"
#include "sampler/errors.hpp"
#include "sampler/mask.hpp"
#include "sampler/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace sampler {

/// Parameters of the dual-symbol ansatz
/// mtilde(xi) = e^{-i(n+1)xi/2} cos(xi/2)^Ntilde rtilde(cos xi),
/// with 2l = N + Ntilde and deg(rtilde) = m >= l.
struct DualSpec {
    int n = 3;
    int h_minus_n = 1;  // integer so the solve stays in exact rationals
    int n_tilde = 2;
    int m_degree = 2;

    int big_n() const { return n - 1; }
    int ell() const { return (big_n() + n_tilde) / 2; }
};

/// Smallest Ntilde >= 1 with N + Ntilde even.
inline int default_n_tilde(int n) { return (n - 1) % 2 == 0 ? 2 : 1; }

/// Symbol factorization of the GP mask (Lemma of the GP class):
/// m^{(n,h)}(xi) = e^{-i(n+1)xi/2} cos(xi/2)^N r(cos xi) with N = n-1 and
/// r(x) = (2^{h-n+1} - 1 + x) / 2^{h-n+1}.  Stated for n > 2; we apply the
/// same formula at n = 2 (flagged unverified by the reference material).
struct SymbolFactorization {
    int big_n;
    RationalPoly r;        // exact when h-n is an integer, else empty
    double g = 0;          // 2^{h-n+1}
    bool exact = false;
    bool verified_for_n = true;  // n > 2
};

inline SymbolFactorization gp_symbol_factorization(int n, double h) {
    if (n < 2) throw std::invalid_argument("gp_symbol_factorization: n must be >= 2");
    if (!(h > n - 1)) throw std::invalid_argument("gp_symbol_factorization: h must be > n-1");
    SymbolFactorization f;
    f.big_n = n - 1;
    f.g = std::exp2(h - n + 1);
    f.verified_for_n = n > 2;
    if (h == std::floor(h)) {
        Rational g = pow2(static_cast<int>(h) - n + 1);
        f.r = RationalPoly({(g - 1) / g, 1 / g});
        f.exact = true;
    }
    return f;
}

/// r(cos xi) evaluated in doubles for arbitrary h.
inline double gp_r_factor(int n, double h, double cx) {
    double g = std::exp2(h - n + 1);
    return (g - 1.0 + cx) / g;
}

/// The Bezout right-hand side sum_{i<l} C(l-1+i, i) ((1-x)/2)^i.
inline RationalPoly bezout_target(int ell) {
    RationalPoly t;
    for (int i = 0; i < ell; ++i)
        t = t + Rational(binomial(ell - 1 + i, i)) * half_one_minus_x_pow(i);
    return t;
}

/// Linear conditions on the coefficients of rtilde:
///   (i)  remainder of s[a](x) mod ((1-x)/2)^l vanishes   (l rows)
///   (ii) even part of the quotient vanishes, written as the coefficients of
///        q(x) + q(-x)                                     (floor((m+1-l)/2)+1 rows)
/// where s[a](x) = r(x) rtilde(x) - bezout_target.
struct DualConditions {
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
};

inline DualConditions build_dual_conditions(const RationalPoly& r, int ell, int m) {
    if (m < ell) throw std::invalid_argument("dual degree m must be at least l");
    RationalPoly mod = half_one_minus_x_pow(ell);
    std::vector<RationalPoly> quo(m + 1), rem(m + 1);
    for (int j = 0; j <= m; ++j) {
        auto [q, rm] = divmod(r * RationalPoly::monomial(j), mod);
        quo[j] = q;
        rem[j] = rm;
    }
    auto [q0, r0] = divmod(Rational(-1) * bezout_target(ell), mod);
    DualConditions out;
    for (int i = 0; i < ell; ++i) {
        std::vector<Rational> row(m + 1);
        for (int j = 0; j <= m; ++j) row[j] = rem[j].coeff(i);
        out.rows.push_back(std::move(row));
        out.rhs.push_back(-r0.coeff(i));
    }
    int dq = m + 1 - ell;
    for (int p = 0; p <= dq; p += 2) {
        std::vector<Rational> row(m + 1);
        for (int j = 0; j <= m; ++j) row[j] = 2 * quo[j].coeff(p);
        out.rows.push_back(std::move(row));
        out.rhs.push_back(-2 * q0.coeff(p));
    }
    return out;
}

namespace detail {

/// Exact Gauss-Jordan solve.  Square consistent systems give the unique
/// solution; underdetermined ones are completed by the minimum-l2-norm
/// solution; inconsistent rows raise SingularSystemError.
inline std::vector<Rational> solve_exact(std::vector<std::vector<Rational>> a,
                                         std::vector<Rational> b) {
    int rows = static_cast<int>(a.size());
    int cols = rows ? static_cast<int>(a[0].size()) : 0;
    std::vector<int> pivot_col;
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int piv = -1;
        for (int i = rank; i < rows; ++i)
            if (a[i][col] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(a[piv], a[rank]);
        std::swap(b[piv], b[rank]);
        Rational d = a[rank][col];
        for (int j = 0; j < cols; ++j) a[rank][j] /= d;
        b[rank] /= d;
        for (int i = 0; i < rows; ++i) {
            if (i == rank || a[i][col] == 0) continue;
            Rational f = a[i][col];
            for (int j = 0; j < cols; ++j) a[i][j] -= f * a[rank][j];
            b[i] -= f * b[rank];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    for (int i = rank; i < rows; ++i)
        if (b[i] != 0) throw SingularSystemError("inconsistent linear conditions");
    std::vector<int> free_cols;
    {
        size_t p = 0;
        for (int col = 0; col < cols; ++col) {
            if (p < pivot_col.size() && pivot_col[p] == col)
                ++p;
            else
                free_cols.push_back(col);
        }
    }
    std::vector<Rational> x(cols, Rational(0));
    if (free_cols.empty()) {
        for (int i = 0; i < rank; ++i) x[pivot_col[i]] = b[i];
        return x;
    }
    // x = x_p + N t with x_p the particular solution (free vars 0) and N the
    // nullspace basis; minimize |x|^2 exactly via (N^T N) t = -N^T x_p.
    int nf = static_cast<int>(free_cols.size());
    std::vector<Rational> xp(cols, Rational(0));
    for (int i = 0; i < rank; ++i) xp[pivot_col[i]] = b[i];
    std::vector<std::vector<Rational>> null_basis(nf, std::vector<Rational>(cols, Rational(0)));
    for (int t = 0; t < nf; ++t) {
        null_basis[t][free_cols[t]] = 1;
        for (int i = 0; i < rank; ++i) null_basis[t][pivot_col[i]] = -a[i][free_cols[t]];
    }
    std::vector<std::vector<Rational>> ntn(nf, std::vector<Rational>(nf, Rational(0)));
    std::vector<Rational> ntb(nf, Rational(0));
    for (int i = 0; i < nf; ++i) {
        for (int j = 0; j < nf; ++j)
            for (int c = 0; c < cols; ++c) ntn[i][j] += null_basis[i][c] * null_basis[j][c];
        for (int c = 0; c < cols; ++c) ntb[i] -= null_basis[i][c] * xp[c];
    }
    std::vector<Rational> t = solve_exact(std::move(ntn), std::move(ntb));
    x = xp;
    for (int i = 0; i < nf; ++i)
        for (int c = 0; c < cols; ++c) x[c] += t[i] * null_basis[i][c];
    return x;
}

}  // namespace detail

/// Expands e^{-i(n+1)xi/2} cos(xi/2)^Nt rt(cos xi) into mask coefficients:
/// work in w = e^{-i xi/2}; all surviving powers of w are even exactly when
/// n+1 and Nt have equal parity, and a_k = 2 [coefficient of w^{2k}].
inline Mask mask_from_cos_polynomial(int n, int n_tilde, const RationalPoly& rt) {
    if ((n + 1 - n_tilde) % 2 != 0)
        throw std::invalid_argument("parity mismatch: n+1 and Ntilde must have equal parity");
    std::map<int, Rational> acc;  // exponent of w -> coefficient
    // rt(cos xi) with cos xi = (w^2 + w^-2)/2, times (1 + w^2)^Nt / (2^Nt w^Nt), times w^{n+1}
    std::map<int, Rational> rt_part{{0, Rational(0)}};
    {
        std::map<int, Rational> cos_pow{{0, Rational(1)}};
        for (int j = 0; j <= rt.degree(); ++j) {
            if (j > 0) {
                std::map<int, Rational> next;
                for (const auto& [e, c] : cos_pow) {
                    next[e + 2] += c / 2;
                    next[e - 2] += c / 2;
                }
                cos_pow = std::move(next);
            }
            for (const auto& [e, c] : cos_pow) rt_part[e] += rt.coeff(j) * c;
        }
    }
    Rational inv2nt = Rational(1) / Rational(BigInt(1) << n_tilde);
    for (int i = 0; i <= n_tilde; ++i) {
        Rational pref = Rational(binomial(n_tilde, i)) * inv2nt;
        int e0 = 2 * i - n_tilde + (n + 1);
        for (const auto& [e, c] : rt_part) acc[e0 + e] += pref * c;
    }
    std::vector<Rational> coeffs;
    int kmin = 0, kmax = 0;
    bool first = true;
    for (const auto& [e, c] : acc) {
        if (c == 0) continue;
        if (e % 2 != 0) throw std::logic_error("odd half-integer power survived symbol expansion");
        int k = e / 2;
        if (first) {
            kmin = kmax = k;
            first = false;
        } else {
            kmin = std::min(kmin, k);
            kmax = std::max(kmax, k);
        }
    }
    coeffs.assign(kmax - kmin + 1, Rational(0));
    for (const auto& [e, c] : acc)
        if (c != 0) coeffs[e / 2 - kmin] = 2 * c;
    return make_mask(std::move(coeffs), kmin);
}

/// Solves the Bezout-type linear system for the dual polynomial rtilde and
/// returns the dual refinement mask.  Requires integer h-n so everything
/// stays in exact rational arithmetic.
inline Mask solve_dual_mask(const DualSpec& spec) {
    int n = spec.n;
    if (n < 2) throw std::invalid_argument("solve_dual_mask: n must be >= 2");
    if ((spec.big_n() + spec.n_tilde) % 2 != 0)
        throw std::invalid_argument("solve_dual_mask: N + Ntilde must be even");
    int ell = spec.ell();
    if (ell < 1) throw std::invalid_argument("solve_dual_mask: l must be >= 1");
    if (spec.m_degree < ell) throw std::invalid_argument("solve_dual_mask: m must be >= l");
    Rational g = pow2(spec.h_minus_n + 1);
    RationalPoly r({(g - 1) / g, Rational(1) / g});
    auto cond = build_dual_conditions(r, ell, spec.m_degree);
    auto sol = detail::solve_exact(cond.rows, cond.rhs);
    Mask dual = mask_from_cos_polynomial(n, spec.n_tilde, RationalPoly(std::move(sol)));
    dual.order_n = n;
    return dual;
}

/// Residuals of the duality checks.
struct BiorthReport {
    double max_symbol_residual = 0;  // sup_xi |m(xi) mt*(xi) + m(xi+pi) mt*(xi+pi) - 1|
    double max_time_residual = 0;    // max_k |<phi, phit(.-k)> - delta_{k0}|
    bool converged = false;
    std::string diagnostic;
};

namespace detail {

/// Trapezoid values of <phi, phit(.-k)> for all overlapping integer shifts
/// on the common level-L dyadic grid.  Piecewise-constant pairs use the
/// (exact) left-endpoint rule instead.
inline std::map<int, double> time_inner_products(const DyadicFunction& p, const DyadicFunction& d) {
    std::map<int, double> out;
    double h = p.grid_step();
    bool step_rule = p.piecewise_constant || d.piecewise_constant;
    for (int k = p.s0 - d.s1; k <= p.s1 - d.s0; ++k) {
        int lo = std::max(p.s0, d.s0 + k), hi = std::min(p.s1, d.s1 + k);
        if (hi <= lo) {
            out[k] = 0.0;
            continue;
        }
        int n = (hi - lo) << p.level;
        int ip = (lo - p.s0) << p.level;
        int id = (lo - d.s0 - k) << p.level;
        double acc = 0.0;
        for (int i = 0; i <= n; ++i) {
            double v = p.values[ip + i] * d.values[id + i];
            if (step_rule) {
                if (i < n) acc += v;
            } else {
                acc += (i == 0 || i == n) ? 0.5 * v : v;
            }
        }
        out[k] = acc * h;
    }
    return out;
}

}  // namespace detail

/// Numeric verification of biorthogonality: the symbol identity on a uniform
/// xi grid, and the time-domain inner products from cascades of both masks.
/// The grid inner products are trapezoid sums at levels L-2, L-1, L combined
/// by one Aitken/Richardson step (plain level-10 trapezoid stalls near 1e-5
/// for the rougher duals).
inline BiorthReport verify_biorthogonality(const Mask& primal, const Mask& dual, int L, double tol) {
    if (std::abs(primal.sum() - 2.0) > 1e-9 || std::abs(dual.sum() - 2.0) > 1e-9)
        throw std::invalid_argument("verify_biorthogonality: masks must sum to 2");
    BiorthReport rep;
    const int points = 1024;
    for (int i = 0; i < points; ++i) {
        double xi = 2.0 * M_PI * i / points;
        std::complex<double> v = mask_symbol(primal, xi) * std::conj(mask_symbol(dual, xi)) +
                                 mask_symbol(primal, xi + M_PI) * std::conj(mask_symbol(dual, xi + M_PI));
        rep.max_symbol_residual = std::max(rep.max_symbol_residual, std::abs(v - 1.0));
    }
    int base = std::max(L - 2, 1);
    try {
        std::vector<std::map<int, double>> seq;
        for (int lev = base; lev <= L; ++lev)
            seq.push_back(detail::time_inner_products(cascade_evaluate(primal, lev),
                                                      cascade_evaluate(dual, lev)));
        const auto& last = seq.back();
        for (const auto& [k, v] : last) {
            double ext = v;
            if (seq.size() == 3) {
                double i0 = seq[0].count(k) ? seq[0].at(k) : 0.0;
                double i1 = seq[1].count(k) ? seq[1].at(k) : 0.0;
                double d1 = i1 - i0, d2 = v - i1;
                if (std::abs(d1 - d2) > 1e-300) ext = v + d2 * d2 / (d1 - d2);
            }
            double target = (k == 0) ? 1.0 : 0.0;
            rep.max_time_residual = std::max(rep.max_time_residual, std::abs(ext - target));
        }
        rep.converged = rep.max_symbol_residual <= tol && rep.max_time_residual <= tol;
    } catch (const std::runtime_error& e) {
        rep.converged = false;
        rep.max_time_residual = std::numeric_limits<double>::infinity();
        rep.diagnostic = e.what();
    }
    return rep;
}

}  // namespace sampler
