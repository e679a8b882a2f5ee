#pragma once

#include "sampler/basis.hpp"
#include "sampler/errors.hpp"
#include "sampler/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace sampler {

struct GramianMatrix {
    Eigen::MatrixXd g;
    int bandwidth = 0;  // max |h-k| with a nonzero entry (per axis structure in 1-D)

    int size() const { return static_cast<int>(g.rows()); }
};

namespace detail {

/// <phi_h, phi_k> for one axis, normalized elements included later.
/// B-spline pairs integrate on integer-knot subdivisions (the integrand is
/// piecewise polynomial of degree <= 2n there); everything else subdivides at
/// the dyadic evaluation grid so the result is exact for the interpolant.
inline double axis_pair_inner(const BasisAxis& ax, int i, int k) {
    auto [a1, b1] = ax.support(i);
    auto [a2, b2] = ax.support(k);
    double lo = std::max(a1, a2), hi = std::min(b1, b2);
    if (hi <= lo) return 0.0;
    auto f = [&](double x) { return ax.translate(i, x) * ax.translate(k, x); };
    double scale = std::ldexp(1.0, -ax.level_j);
    if (ax.mask.is_bspline() || ax.mother->piecewise_constant) {
        std::vector<double> knots;
        for (int t = ax.mother->s0; t <= ax.mother->s1; ++t) {
            knots.push_back((ax.shifts[i] + t) * scale);
            knots.push_back((ax.shifts[k] + t) * scale);
        }
        return integrate_composite(f, lo, hi, knots);
    }
    double step = scale * ax.mother->grid_step();
    double anchor = (ax.shifts[i] + ax.mother->s0) * scale;
    return integrate_on_grid(f, lo, hi, anchor, step);
}

inline Eigen::MatrixXd axis_gramian(const BasisAxis& ax) {
    int n = ax.dim();
    int band = ax.mother->s1 - ax.mother->s0;  // supports meet iff |h-k| < support length
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = i; k < std::min(n, i + band + 1); ++k) {
            double v = axis_pair_inner(ax, i, k);
            g(i, k) = v;
            g(k, i) = v;
        }
    return g;
}

}  // namespace detail

/// Gramian of the normalized basis.  The 2-D Gramian is the Kronecker
/// product of the axis Gramians (Fubini on separable integrands).
inline GramianMatrix gramian(const Basis& basis) {
    GramianMatrix out;
    double nf = basis.normalization();
    if (basis.dimension() == 1) {
        out.g = (nf * nf) * detail::axis_gramian(basis.axis(0));
        out.bandwidth = basis.axis(0).mother->s1 - basis.axis(0).mother->s0;
        return out;
    }
    Eigen::MatrixXd gx = detail::axis_gramian(basis.axis(0));
    Eigen::MatrixXd gy = detail::axis_gramian(basis.axis(1));
    int nx = static_cast<int>(gx.rows()), ny = static_cast<int>(gy.rows());
    Eigen::MatrixXd g(nx * ny, nx * ny);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            for (int k = 0; k < nx; ++k)
                for (int l = 0; l < ny; ++l) g(i * ny + j, k * ny + l) = gx(i, k) * gy(j, l);
    out.g = (nf * nf) * g;
    int bx = basis.axis(0).mother->s1 - basis.axis(0).mother->s0;
    out.bandwidth = bx * ny + (basis.axis(1).mother->s1 - basis.axis(1).mother->s0);
    return out;
}

/// Rows of G^-1 are the coordinates of the canonical dual basis in the
/// primal basis.  Reports a singular G with its condition estimate.
inline Eigen::MatrixXd canonical_dual_coeffs(const GramianMatrix& gm, double rcond_limit = 1e-14) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gm.g);
    if (es.info() != Eigen::Success) throw EigenSolveError("eigen decomposition of Gramian failed");
    double lmin = es.eigenvalues().minCoeff(), lmax = es.eigenvalues().maxCoeff();
    if (lmin <= rcond_limit * lmax)
        throw SingularSystemError("Gramian numerically singular, condition estimate " +
                                  std::to_string(lmax / std::max(lmin, 1e-300)));
    return es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
           es.eigenvectors().transpose();
}

/// Spectral condition number of a symmetric positive-definite matrix, with a
/// residual check on the extreme eigenpairs.
inline double condition_number(const GramianMatrix& gm) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gm.g);
    if (es.info() != Eigen::Success) throw EigenSolveError("symmetric eigen solve did not converge");
    double lmin = es.eigenvalues().minCoeff(), lmax = es.eigenvalues().maxCoeff();
    if (lmin <= 0) throw EigenSolveError("matrix is not positive definite");
    double norm = gm.g.norm();
    for (int idx : {0, gm.size() - 1}) {
        double res = (gm.g * es.eigenvectors().col(idx) -
                      es.eigenvalues()(idx) * es.eigenvectors().col(idx))
                         .norm();
        if (res > 1e-10 * norm) throw EigenSolveError("eigenpair residual exceeds tolerance");
    }
    return lmax / lmin;
}

/// Condition number after normalizing every element to unit L2 norm (the
/// correlation matrix D^{-1/2} G D^{-1/2}); this is the interval adaptation
/// used for the GP condition study.
inline double normalized_condition_number(const GramianMatrix& gm) {
    Eigen::VectorXd d = gm.g.diagonal().cwiseSqrt().cwiseInverse();
    GramianMatrix scaled;
    scaled.g = d.asDiagonal() * gm.g * d.asDiagonal();
    scaled.bandwidth = gm.bandwidth;
    return condition_number(scaled);
}

}  // namespace sampler
