#pragma once

#include "sampler/cascade.hpp"
#include "sampler/domain.hpp"
#include "sampler/mask.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sampler {

/// One axis of a level-j basis: all translates phi(2^j x - k) whose open
/// support meets the interval, restricted to it (plain restriction of the
/// overhanging boundary translates).
struct BasisAxis {
    Mask mask;
    std::shared_ptr<const DyadicFunction> mother;
    int level_j = 0;
    double a = 0, b = 1;
    std::vector<int> shifts;

    int dim() const { return static_cast<int>(shifts.size()); }

    /// Unnormalized translate value phi(2^j x - k_i), clipped to [a, b].
    double translate(int i, double x) const {
        if (x < a || x > b) return 0.0;
        return mother->value_smooth(std::ldexp(x, level_j) - shifts[i]);
    }

    std::pair<double, double> support(int i) const {
        double s = std::ldexp(1.0, -level_j);
        return {std::max(a, (shifts[i] + mother->s0) * s),
                std::min(b, (shifts[i] + mother->s1) * s)};
    }
};

/// Level-j basis on an interval or rectangle.  Elements are indexed k =
/// 0..size()-1 (row-major (kx, ky) pairs in 2-D) and carry the 2^{dj/2}
/// normalization, so that 2^{-dj/2} sum_k phi_{j,k} = 1 on the domain.
class Basis {
public:
    Basis(BasisAxis ax, BoxDomain dom)
        : domain_(dom), axes_{std::move(ax), {}}, dim_d_(1) {}
    Basis(BasisAxis ax, BasisAxis ay, BoxDomain dom)
        : domain_(dom), axes_{std::move(ax), std::move(ay)}, dim_d_(2) {}

    const BoxDomain& domain() const { return domain_; }
    int level() const { return axes_[0].level_j; }
    int dimension() const { return dim_d_; }
    const BasisAxis& axis(int i) const { return axes_[i]; }

    int size() const {
        return dim_d_ == 1 ? axes_[0].dim() : axes_[0].dim() * axes_[1].dim();
    }

    double normalization() const { return std::exp2(0.5 * axes_[0].level_j * dim_d_); }

    std::pair<int, int> unravel(int k) const {
        if (dim_d_ == 1) return {k, 0};
        return {k / axes_[1].dim(), k % axes_[1].dim()};
    }

    /// phi_{j,k}(x[,y]) with the 2^{dj/2} factor applied.
    double evaluate(int k, double x, double y = 0) const {
        auto [kx, ky] = unravel(k);
        double v = axes_[0].translate(kx, x);
        if (dim_d_ == 2) v *= axes_[1].translate(ky, y);
        return norm_factor_ * v;
    }

    /// Support box of element k clipped to the domain.
    BoxDomain support(int k) const {
        auto [kx, ky] = unravel(k);
        auto [x0, x1] = axes_[0].support(kx);
        if (dim_d_ == 1) return BoxDomain::interval(x0, x1);
        auto [y0, y1] = axes_[1].support(ky);
        return BoxDomain::rectangle(x0, x1, y0, y1);
    }

    /// Indices of the elements whose support contains x (one axis).
    std::vector<int> active_on_axis(int axis, double x) const {
        const BasisAxis& ax = axes_[axis];
        std::vector<int> out;
        double t = std::ldexp(x, ax.level_j);
        int k_lo = static_cast<int>(std::ceil(t - ax.mother->s1 - 1e-12));
        int k_hi = static_cast<int>(std::floor(t - ax.mother->s0 + 1e-12));
        int first = ax.shifts.front();
        for (int k = std::max(k_lo, first); k <= std::min(k_hi, ax.shifts.back()); ++k)
            out.push_back(k - first);
        return out;
    }

    /// Sum of all normalized elements at a point; equals 2^{dj/2} wherever
    /// the translate stencil is complete.
    double partition_sum(double x, double y = 0) const {
        double sx = 0;
        for (int i : active_on_axis(0, x)) sx += axes_[0].translate(i, x);
        if (dim_d_ == 1) return norm_factor_ * sx;
        double sy = 0;
        for (int i : active_on_axis(1, y)) sy += axes_[1].translate(i, y);
        return norm_factor_ * sx * sy;
    }

    void finalize() { norm_factor_ = normalization(); }

private:
    BoxDomain domain_;
    std::array<BasisAxis, 2> axes_;
    int dim_d_ = 1;
    double norm_factor_ = 1.0;

    friend Basis tensor_basis(const Basis& bx, const Basis& by);
};

/// All translates of the refinable function at level j meeting (a, b).
/// Requires 2^j a and 2^j b to be integers so the translate grid is aligned
/// with the domain; element count is then 2^j (b-a) + n for a GP mask.
inline Basis build_interval_basis(const Mask& mask, int j, const BoxDomain& dom, int cascade_level = 10) {
    if (dom.dim != 1) throw std::invalid_argument("build_interval_basis: domain must be 1-D");
    if (j < 0) throw std::invalid_argument("build_interval_basis: level must be >= 0");
    double sa = std::ldexp(dom.lo[0], j), sb = std::ldexp(dom.hi[0], j);
    if (std::abs(sa - std::round(sa)) > 1e-9 || std::abs(sb - std::round(sb)) > 1e-9)
        throw std::invalid_argument("build_interval_basis: domain endpoints are not dyadic at this level");
    BasisAxis ax;
    ax.mask = mask;
    ax.mother = std::make_shared<DyadicFunction>(cascade_evaluate(mask, cascade_level));
    ax.level_j = j;
    ax.a = dom.lo[0];
    ax.b = dom.hi[0];
    int ia = static_cast<int>(std::llround(sa)), ib = static_cast<int>(std::llround(sb));
    for (int k = ia - ax.mother->s1 + 1; k <= ib - ax.mother->s0 - 1; ++k) ax.shifts.push_back(k);
    Basis b(std::move(ax), dom);
    b.finalize();
    return b;
}

/// Tensor product of two 1-D bases (same level).
inline Basis tensor_basis(const Basis& bx, const Basis& by) {
    if (bx.dimension() != 1 || by.dimension() != 1)
        throw std::invalid_argument("tensor_basis: factors must be 1-D");
    if (bx.level() != by.level())
        throw std::invalid_argument("tensor_basis: levels must match");
    BoxDomain dom = BoxDomain::rectangle(bx.domain().lo[0], bx.domain().hi[0],
                                         by.domain().lo[0], by.domain().hi[0]);
    Basis b(bx.axes_[0], by.axes_[0], dom);
    b.finalize();
    return b;
}

}  // namespace sampler
