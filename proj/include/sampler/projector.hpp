#pragma once

#include "sampler/cascade.hpp"
#include "sampler/gramian.hpp"
#include "sampler/quadrature.hpp"
#include "sampler/sampling.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace sampler {

/// Dual representation behind the projector P_j: either the canonical dual
/// (rows of G^-1, globally supported) or translates of a compactly supported
/// dual refinable function.
struct CanonicalDual {
    Eigen::MatrixXd inv_gramian;
};
struct MaskDual {
    Mask mask;
    std::shared_ptr<const DyadicFunction> mother;
};
using DualRep = std::variant<CanonicalDual, MaskDual>;

inline CanonicalDual make_canonical_dual(const Basis& basis) {
    return CanonicalDual{canonical_dual_coeffs(gramian(basis))};
}
inline MaskDual make_mask_dual(const Mask& dual_mask, int cascade_level = 10) {
    return MaskDual{dual_mask,
                    std::make_shared<DyadicFunction>(cascade_evaluate(dual_mask, cascade_level))};
}

/// M_{psi phit}: rows k over basis elements, columns l over nodes,
/// entries <psi_l, phit_{j,k}>.
struct ProjectorMatrix {
    Eigen::MatrixXd m;
    std::optional<int> bandwidth;  // max |row - col| over nonzero entries when banded
    bool dense = true;

    int rows() const { return static_cast<int>(m.rows()); }
    int cols() const { return static_cast<int>(m.cols()); }
};

namespace detail {

/// Integral of a translate over [lo, hi] for one axis (unnormalized).
inline double axis_cell_integral(const BasisAxis& ax, int i, double lo, double hi) {
    auto [a, b] = ax.support(i);
    lo = std::max(lo, a);
    hi = std::min(hi, b);
    if (hi <= lo) return 0.0;
    auto f = [&](double x) { return ax.translate(i, x); };
    double scale = std::ldexp(1.0, -ax.level_j);
    if (ax.mask.is_bspline() || ax.mother->piecewise_constant) {
        std::vector<double> knots;
        for (int t = ax.mother->s0; t <= ax.mother->s1; ++t)
            knots.push_back((ax.shifts[i] + t) * scale);
        return integrate_composite(f, lo, hi, knots);
    }
    return integrate_on_grid(f, lo, hi, (ax.shifts[i] + ax.mother->s0) * scale,
                             scale * ax.mother->grid_step());
}

/// Same for an arbitrary dyadic mother (used for dual translates).
inline double axis_cell_integral(const DyadicFunction& mother, int level_j, int shift, double lo,
                                 double hi, double dom_lo, double dom_hi, bool knots_only) {
    double scale = std::ldexp(1.0, -level_j);
    lo = std::max({lo, (shift + mother.s0) * scale, dom_lo});
    hi = std::min({hi, (shift + mother.s1) * scale, dom_hi});
    if (hi <= lo) return 0.0;
    auto f = [&](double x) { return mother.value_smooth(std::ldexp(x, level_j) - shift); };
    if (knots_only || mother.piecewise_constant) {
        std::vector<double> knots;
        for (int t = mother.s0; t <= mother.s1; ++t) knots.push_back((shift + t) * scale);
        return integrate_composite(f, lo, hi, knots);
    }
    return integrate_on_grid(f, lo, hi, (shift + mother.s0) * scale, scale * mother.grid_step());
}

/// Integral of f over a convex polygon piece lying inside one knot cell, by
/// fan triangulation and a Duffy-transformed tensor Gauss rule (exact for
/// the piecewise-polynomial integrands that arise from B-spline tensors).
template <typename F>
double polygon_integral_smooth(const Polygon& poly, F&& f) {
    if (poly.size() < 3) return 0.0;
    double acc = 0;
    for (size_t t = 1; t + 1 < poly.size(); ++t) {
        const Point& v0 = poly[0];
        const Point& v1 = poly[t];
        const Point& v2 = poly[t + 1];
        double e1x = v1[0] - v0[0], e1y = v1[1] - v0[1];
        double e2x = v2[0] - v1[0], e2y = v2[1] - v1[1];
        double cross = e1x * e2y - e1y * e2x;
        if (std::abs(cross) < 1e-30) continue;
        double tri = 0;
        for (int gu = 0; gu < 8; ++gu) {
            double u = 0.5 + 0.5 * GaussLegendre8::nodes[gu];
            double wu = 0.5 * GaussLegendre8::weights[gu];
            for (int gv = 0; gv < 8; ++gv) {
                double v = 0.5 + 0.5 * GaussLegendre8::nodes[gv];
                double wv = 0.5 * GaussLegendre8::weights[gv];
                double x = v0[0] + u * (e1x + v * e2x);
                double y = v0[1] + u * (e1y + v * e2y);
                tri += wu * wv * u * f(x, y);
            }
        }
        acc += tri * cross;  // signed; fan of a CCW convex polygon keeps it positive
    }
    return acc;
}

/// Integral of one tensor element over a convex polygon, splitting the
/// polygon at the knot lattice of the basis level first.
inline double polygon_element_integral(const Basis& basis, int k, const Polygon& cell) {
    if (cell.size() < 3) return 0.0;
    auto [kx, ky] = basis.unravel(k);
    const BasisAxis& ax = basis.axis(0);
    const BasisAxis& ay = basis.axis(1);
    double sx = std::ldexp(1.0, -ax.level_j);
    auto [x0, x1] = ax.support(kx);
    auto [y0, y1] = ay.support(ky);
    Polygon clipped = cell;
    clipped = clip_halfplane(clipped, -1, 0, -x0);
    clipped = clip_halfplane(clipped, 1, 0, x1);
    clipped = clip_halfplane(clipped, 0, -1, -y0);
    clipped = clip_halfplane(clipped, 0, 1, y1);
    if (clipped.size() < 3) return 0.0;
    auto f = [&](double x, double y) { return ax.translate(kx, x) * ay.translate(ky, y); };
    double acc = 0;
    int ix0 = static_cast<int>(std::floor(x0 / sx + 0.5));
    int ix1 = static_cast<int>(std::floor(x1 / sx + 0.5));
    for (int ix = ix0; ix < ix1; ++ix) {
        Polygon strip = clip_halfplane(clipped, -1, 0, -(ix * sx));
        strip = clip_halfplane(strip, 1, 0, (ix + 1) * sx);
        if (strip.size() < 3) continue;
        int iy0 = static_cast<int>(std::floor(y0 / sx + 0.5));
        int iy1 = static_cast<int>(std::floor(y1 / sx + 0.5));
        for (int iy = iy0; iy < iy1; ++iy) {
            Polygon piece = clip_halfplane(strip, 0, -1, -(iy * sx));
            piece = clip_halfplane(piece, 0, 1, (iy + 1) * sx);
            if (piece.size() < 3) continue;
            acc += polygon_integral_smooth(piece, f);
        }
    }
    return acc;
}

/// C_{kl} = int_{cell_l} phi_k (normalized basis).
inline Eigen::MatrixXd cell_integral_matrix(const Basis& basis, const SamplingSet& set) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(basis.size(), set.count());
    double nf = basis.normalization();
    if (basis.dimension() == 1) {
        for (int l = 0; l < set.count(); ++l) {
            if (set.duplicate_of[l] >= 0) continue;
            auto [lo, hi] = set.cells_1d[l];
            for (int k = 0; k < basis.size(); ++k)
                c(k, l) = nf * axis_cell_integral(basis.axis(0), k, lo, hi);
        }
    } else {
        for (int l = 0; l < set.count(); ++l) {
            if (set.duplicate_of[l] >= 0) continue;
            const Polygon& cell = set.cells_2d[l];
            for (int k = 0; k < basis.size(); ++k)
                c(k, l) = nf * polygon_element_integral(basis, k, cell);
        }
    }
    return c;
}

/// <psi_l, phi_k> for the smooth bump family by brute quadrature over the
/// ball-support intersection (used only when the smooth psi mode is chosen;
/// accuracy here affects the contraction rate, not the recovered limit).
inline Eigen::MatrixXd smooth_psi_matrix(const Basis& basis, const SmoothPsi& psi) {
    const SamplingSet& set = *psi.set;
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(basis.size(), set.count());
    for (int l = 0; l < set.count(); ++l) {
        if (set.duplicate_of[l] >= 0) continue;
        double cx = set.nodes[l][0], cy = set.dim() == 2 ? set.nodes[l][1] : 0.0;
        for (int k = 0; k < basis.size(); ++k) {
            BoxDomain s = basis.support(k);
            double lox = std::max(s.lo[0], cx - psi.radius), hix = std::min(s.hi[0], cx + psi.radius);
            if (hix <= lox) continue;
            if (basis.dimension() == 1) {
                auto f = [&](double x) { return psi(l, x) * basis.evaluate(k, x); };
                std::vector<double> breaks{cx};
                double step = (hix - lox) / 16;
                for (int t = 1; t < 16; ++t) breaks.push_back(lox + t * step);
                c(k, l) = integrate_composite(f, lox, hix, breaks);
            } else {
                double loy = std::max(s.lo[1], cy - psi.radius);
                double hiy = std::min(s.hi[1], cy + psi.radius);
                if (hiy <= loy) continue;
                const int cells = 6;
                double acc = 0;
                for (int i = 0; i < cells; ++i) {
                    for (int jj = 0; jj < cells; ++jj) {
                        double x0 = lox + (hix - lox) * i / cells;
                        double x1 = lox + (hix - lox) * (i + 1) / cells;
                        double y0 = loy + (hiy - loy) * jj / cells;
                        double y1 = loy + (hiy - loy) * (jj + 1) / cells;
                        for (int gu = 0; gu < 8; ++gu)
                            for (int gv = 0; gv < 8; ++gv) {
                                double x = 0.5 * (x0 + x1) + 0.5 * (x1 - x0) * GaussLegendre8::nodes[gu];
                                double y = 0.5 * (y0 + y1) + 0.5 * (y1 - y0) * GaussLegendre8::nodes[gv];
                                acc += 0.25 * (x1 - x0) * (y1 - y0) * GaussLegendre8::weights[gu] *
                                       GaussLegendre8::weights[gv] * psi(l, x, y) *
                                       basis.evaluate(k, x, y);
                            }
                    }
                }
                c(k, l) = acc;
            }
        }
    }
    return c;
}

inline std::optional<int> measure_bandwidth(const Eigen::MatrixXd& m) {
    int bw = 0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0.0) bw = std::max(bw, std::abs(i - j));
    return bw;
}

}  // namespace detail

/// Builds M_{psi phit} for the Voronoi indicator family.  Rejects cell
/// families that fail to cover the domain (their measures must sum to the
/// domain measure).
inline ProjectorMatrix projector_matrix(const Basis& basis, const DualRep& dual,
                                        const SamplingSet& set) {
    double total = 0;
    for (int l = 0; l < set.count(); ++l) total += set.cell_measure(l);
    if (std::abs(total - set.domain.measure()) > 1e-8 * set.domain.measure())
        throw std::invalid_argument("projector_matrix: cells do not partition the domain");
    ProjectorMatrix out;
    if (std::holds_alternative<CanonicalDual>(dual)) {
        const auto& cd = std::get<CanonicalDual>(dual);
        out.m = cd.inv_gramian * detail::cell_integral_matrix(basis, set);
        out.dense = true;
        return out;
    }
    const auto& md = std::get<MaskDual>(dual);
    // dual translates 2^{dj/2} phit(2^j x - k) restricted to the domain
    out.m = Eigen::MatrixXd::Zero(basis.size(), set.count());
    double nf = basis.normalization();
    if (basis.dimension() == 1) {
        const BasisAxis& ax = basis.axis(0);
        for (int l = 0; l < set.count(); ++l) {
            if (set.duplicate_of[l] >= 0) continue;
            auto [lo, hi] = set.cells_1d[l];
            for (int k = 0; k < basis.size(); ++k)
                out.m(k, l) = nf * detail::axis_cell_integral(*md.mother, ax.level_j,
                                                              ax.shifts[k], lo, hi, ax.a, ax.b,
                                                              false);
        }
    } else {
        throw std::invalid_argument("projector_matrix: mask duals are wired for interval bases");
    }
    out.dense = false;
    out.bandwidth = detail::measure_bandwidth(out.m);
    return out;
}

/// Smooth-psi variant (canonical dual only).
inline ProjectorMatrix projector_matrix_smooth(const Basis& basis, const CanonicalDual& dual,
                                               const SmoothPsi& psi) {
    ProjectorMatrix out;
    out.m = dual.inv_gramian * detail::smooth_psi_matrix(basis, psi);
    out.dense = true;
    return out;
}

}  // namespace sampler
