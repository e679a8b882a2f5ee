#pragma once

#include "sampler/errors.hpp"
#include "sampler/mask.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sampler {

/// Values of a refinable function on the dyadic grid {s0 + i 2^-L},
/// identically zero outside [s0, s1].
struct DyadicFunction {
    int level = 0;
    int s0 = 0, s1 = 0;
    std::vector<double> values;
    bool piecewise_constant = false;  // Haar-type two-tap masks

    double grid_step() const { return std::ldexp(1.0, -level); }
    int grid_size() const { return static_cast<int>(values.size()); }

    /// Linear interpolation between adjacent grid values (step evaluation for
    /// the piecewise-constant case); exactly 0 outside [s0, s1].
    double value_at(double x) const {
        double t = std::ldexp(x - s0, level);
        if (t < 0 || t > static_cast<double>(values.size() - 1)) return 0.0;
        int i = static_cast<int>(t);
        if (i >= static_cast<int>(values.size()) - 1) return values.back();
        if (piecewise_constant) return values[i];
        double f = t - i;
        return values[i] * (1.0 - f) + values[i + 1] * f;
    }

    /// 4-point Lagrange interpolation; used by the basis evaluator where the
    /// extra order matters for quadrature.  Reproduces constants exactly and
    /// is exact on (piecewise-)cubic stretches of the grid data.
    double value_smooth(double x) const {
        if (piecewise_constant) return value_at(x);
        double t = std::ldexp(x - s0, level);
        int n = static_cast<int>(values.size());
        if (t < 0 || t > static_cast<double>(n - 1)) return 0.0;
        int i = static_cast<int>(t);
        if (i >= n - 1) return values.back();
        int base = i - 1;
        if (base < 0) base = 0;
        if (base > n - 4) base = n - 4;
        if (n < 4) {  // tiny grids fall back to linear
            double f = t - i;
            return values[i] * (1.0 - f) + values[i + 1] * f;
        }
        double u = t - base;
        const double* v = values.data() + base;
        double w0 = -(u - 1) * (u - 2) * (u - 3) / 6.0;
        double w1 = u * (u - 2) * (u - 3) / 2.0;
        double w2 = -u * (u - 1) * (u - 3) / 2.0;
        double w3 = u * (u - 1) * (u - 2) / 6.0;
        return w0 * v[0] + w1 * v[1] + w2 * v[2] + w3 * v[3];
    }
};

/// Integer-grid values of the refinable function: the eigenvector of the
/// transfer matrix (a_{2i-j}) for eigenvalue 1, normalized to sum 1.
/// Interior points only; a continuous refinable function vanishes at the
/// support endpoints.
inline std::vector<double> integer_grid_values(const Mask& mask, double eig_tol = 1e-8) {
    int n1 = mask.first_index(), n2 = mask.last_index();
    int s = n2 - n1 - 1;
    if (s <= 0) throw DegenerateMaskError("mask support too short for interior eigenproblem");
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
            int idx = 2 * (n1 + 1 + i) - (n1 + 1 + j) - n1;
            if (idx >= 0 && idx < mask.size()) T(i, j) = mask.coeffs[idx];
        }
    Eigen::EigenSolver<Eigen::MatrixXd> es(T);
    int hits = 0, pick = -1;
    for (int k = 0; k < s; ++k) {
        if (std::abs(es.eigenvalues()[k] - std::complex<double>(1.0, 0.0)) < eig_tol) {
            ++hits;
            pick = k;
        }
    }
    if (hits == 0) throw DegenerateMaskError("transfer matrix has no eigenvalue 1");
    if (hits > 1) throw DegenerateMaskError("eigenvalue-1 eigenspace is not one-dimensional");
    Eigen::VectorXd v = es.eigenvectors().col(pick).real();
    double sum = v.sum();
    if (std::abs(sum) < 1e-12) throw DegenerateMaskError("eigenvector has zero integer-grid sum");
    std::vector<double> out(s);
    for (int i = 0; i < s; ++i) out[i] = v(i) / sum;
    return out;
}

/// Doubles the grid resolution once via the refinement equation:
/// phi(x) = sum_k a_k phi(2x - k), evaluated on the level-(lev) grid from
/// level-(lev-1) values.
inline std::vector<double> subdivide_once(const Mask& mask, const std::vector<double>& prev,
                                          int s0, int s1, int lev) {
    int m = (s1 - s0) * (1 << lev) + 1;
    std::vector<double> next(m, 0.0);
    int half = 1 << (lev - 1);
    for (int i = 0; i < m; ++i) {
        double acc = 0.0;
        // index in level-(lev-1) grid of 2x - k, with x = s0 + i 2^-lev
        for (int t = 0; t < mask.size(); ++t) {
            int k = mask.offset + t;
            int ii = i + (s0 - k) * half;
            if (ii >= 0 && ii < static_cast<int>(prev.size())) acc += mask.coeffs[t] * prev[ii];
        }
        next[i] = acc;
    }
    return next;
}

/// Cascade evaluation of the refinable function on the level-L dyadic grid.
/// Two-tap masks are treated as box functions (Haar); anything else starts
/// from the transfer-matrix eigenvector and refines by subdivision, aborting
/// when the sup norm grows more than 10x over two levels.
inline DyadicFunction cascade_evaluate(const Mask& mask, int L) {
    if (L < 0) throw std::invalid_argument("cascade_evaluate: L must be >= 0");
    if (mask.size() < 2) throw DegenerateMaskError("mask has fewer than two coefficients");
    DyadicFunction f;
    f.level = L;
    f.s0 = mask.first_index();
    f.s1 = mask.last_index();
    if (mask.size() == 2) {
        if (std::abs(mask.coeffs[0] - 1.0) > 1e-12 || std::abs(mask.coeffs[1] - 1.0) > 1e-12)
            throw DegenerateMaskError("two-tap mask is refinable only with coefficients {1,1}");
        f.piecewise_constant = true;
        f.values.assign((1 << L) + 1, 1.0);
        f.values.back() = 0.0;
        return f;
    }
    std::vector<double> vals((f.s1 - f.s0) + 1, 0.0);
    auto interior = integer_grid_values(mask);
    for (int i = 0; i < static_cast<int>(interior.size()); ++i) vals[i + 1] = interior[i];
    double prev_sup = 0.0, prev2_sup = 0.0;
    for (double v : vals) prev_sup = std::max(prev_sup, std::abs(v));
    prev2_sup = prev_sup;
    for (int lev = 1; lev <= L; ++lev) {
        vals = subdivide_once(mask, vals, f.s0, f.s1, lev);
        double sup = 0.0;
        for (double v : vals) sup = std::max(sup, std::abs(v));
        if (lev >= 2 && sup > 10.0 * prev2_sup)
            throw NonConvergentCascadeError("cascade diverges: sup norm grew more than 10x over two levels");
        prev2_sup = prev_sup;
        prev_sup = sup;
    }
    f.values = std::move(vals);
    return f;
}

/// Linear-interpolation point evaluation (0 outside the support).
inline double evaluate_at(const DyadicFunction& f, double x) { return f.value_at(x); }

}  // namespace sampler
