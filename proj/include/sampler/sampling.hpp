#pragma once

#include "sampler/basis.hpp"
#include "sampler/domain.hpp"
#include "sampler/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace sampler {

using Point = std::array<double, 2>;
using Polygon = std::vector<Point>;  // convex, counterclockwise

inline double polygon_area(const Polygon& p) {
    double a = 0;
    for (size_t i = 0; i < p.size(); ++i) {
        const Point& u = p[i];
        const Point& v = p[(i + 1) % p.size()];
        a += u[0] * v[1] - v[0] * u[1];
    }
    return 0.5 * a;
}

/// Clips a convex polygon against the half-plane ax + by <= c.
inline Polygon clip_halfplane(const Polygon& poly, double a, double b, double c) {
    Polygon out;
    size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const Point& p = poly[i];
        const Point& q = poly[(i + 1) % n];
        double fp = a * p[0] + b * p[1] - c;
        double fq = a * q[0] + b * q[1] - c;
        bool in_p = fp <= 1e-14, in_q = fq <= 1e-14;
        if (in_p) out.push_back(p);
        if (in_p != in_q) {
            double t = fp / (fp - fq);
            out.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
        }
    }
    return out;
}

/// Sampling nodes with their Voronoi decomposition of the domain.
/// Near-coincident nodes (separation below 1e-12 diam) keep only one
/// nonempty cell; the duplicates are flagged.
struct SamplingSet {
    BoxDomain domain;
    std::vector<Point> nodes;
    double delta = 0;  // density radius the set was certified (or requested) at

    std::vector<std::pair<double, double>> cells_1d;  // aligned with nodes
    std::vector<Polygon> cells_2d;
    std::vector<int> duplicate_of;  // -1, or index of the retained twin
    bool merged_warning = false;

    int count() const { return static_cast<int>(nodes.size()); }

    int nearest_node(double x, double y = 0) const {
        int best = -1;
        double bd = 1e300;
        for (int i = 0; i < count(); ++i) {
            if (duplicate_of[i] >= 0) continue;
            double dx = nodes[i][0] - x, dy = dim() == 2 ? nodes[i][1] - y : 0.0;
            double d = dx * dx + dy * dy;
            if (d < bd) {
                bd = d;
                best = i;
            }
        }
        return best;
    }

    double cell_measure(int i) const {
        if (duplicate_of[i] >= 0) return 0.0;
        if (dim() == 1) return cells_1d[i].second - cells_1d[i].first;
        return polygon_area(cells_2d[i]);
    }

    int dim() const { return domain.dim; }
};

/// Pass/fail density certificate with the worst uncovered probe point.
struct DensityCertificate {
    bool pass = false;
    double delta = 0;
    double worst_distance = 0;
    Point worst_point{0, 0};
};

inline DensityCertificate check_delta_dense(const std::vector<Point>& nodes, const BoxDomain& dom,
                                            double delta, double probe_resolution) {
    if (probe_resolution > delta / 4 + 1e-15)
        throw std::invalid_argument("check_delta_dense: probe resolution must be <= delta/4");
    DensityCertificate cert;
    cert.delta = delta;
    if (nodes.empty()) return cert;
    auto probe = [&](double x, double y) {
        double best = 1e300;
        for (const Point& p : nodes) {
            double dx = p[0] - x, dy = dom.dim == 2 ? p[1] - y : 0.0;
            best = std::min(best, dx * dx + dy * dy);
        }
        double d = std::sqrt(best);
        if (d > cert.worst_distance) {
            cert.worst_distance = d;
            cert.worst_point = {x, y};
        }
    };
    int nx = static_cast<int>(std::ceil(dom.length(0) / probe_resolution));
    if (dom.dim == 1) {
        for (int i = 0; i <= nx; ++i) probe(dom.lo[0] + dom.length(0) * i / nx, 0);
    } else {
        int ny = static_cast<int>(std::ceil(dom.length(1) / probe_resolution));
        for (int i = 0; i <= nx; ++i)
            for (int j = 0; j <= ny; ++j)
                probe(dom.lo[0] + dom.length(0) * i / nx, dom.lo[1] + dom.length(1) * j / ny);
    }
    cert.pass = cert.worst_distance <= delta;
    return cert;
}

/// Voronoi decomposition: interval midpoints in 1-D, half-plane clipping of
/// the box in 2-D.
inline SamplingSet voronoi_partition(const std::vector<Point>& nodes, const BoxDomain& dom) {
    if (nodes.empty()) throw std::invalid_argument("voronoi_partition: empty node set");
    SamplingSet s;
    s.domain = dom;
    s.nodes = nodes;
    int m = s.count();
    s.duplicate_of.assign(m, -1);
    double merge_eps = 1e-12 * dom.diameter();
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < i; ++j) {
            if (s.duplicate_of[j] >= 0) continue;
            double dx = nodes[i][0] - nodes[j][0];
            double dy = dom.dim == 2 ? nodes[i][1] - nodes[j][1] : 0.0;
            if (std::hypot(dx, dy) < merge_eps) {
                s.duplicate_of[i] = j;
                s.merged_warning = true;
                break;
            }
        }
    }
    if (dom.dim == 1) {
        std::vector<int> order;
        for (int i = 0; i < m; ++i)
            if (s.duplicate_of[i] < 0) order.push_back(i);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return nodes[a][0] < nodes[b][0]; });
        s.cells_1d.assign(m, {0, 0});
        for (size_t r = 0; r < order.size(); ++r) {
            double lo = r == 0 ? dom.lo[0]
                               : 0.5 * (nodes[order[r - 1]][0] + nodes[order[r]][0]);
            double hi = r + 1 == order.size()
                            ? dom.hi[0]
                            : 0.5 * (nodes[order[r]][0] + nodes[order[r + 1]][0]);
            s.cells_1d[order[r]] = {lo, hi};
        }
    } else {
        s.cells_2d.assign(m, {});
        Polygon box{{dom.lo[0], dom.lo[1]},
                    {dom.hi[0], dom.lo[1]},
                    {dom.hi[0], dom.hi[1]},
                    {dom.lo[0], dom.hi[1]}};
        for (int i = 0; i < m; ++i) {
            if (s.duplicate_of[i] >= 0) continue;
            Polygon cell = box;
            for (int j = 0; j < m && !cell.empty(); ++j) {
                if (j == i || s.duplicate_of[j] >= 0) continue;
                // |x - x_i| <= |x - x_j|  <=>  2(x_j - x_i).x <= |x_j|^2 - |x_i|^2
                double ax = 2 * (nodes[j][0] - nodes[i][0]);
                double ay = 2 * (nodes[j][1] - nodes[i][1]);
                double c = nodes[j][0] * nodes[j][0] + nodes[j][1] * nodes[j][1] -
                           nodes[i][0] * nodes[i][0] - nodes[i][1] * nodes[i][1];
                cell = clip_halfplane(cell, ax, ay, c);
            }
            s.cells_2d[i] = std::move(cell);
        }
    }
    return s;
}

/// Sample values aligned with a node set.
struct SampleVector {
    Eigen::VectorXd values;
    enum class Source { measured, synthesized } source = Source::measured;
};

/// Rejects sample vectors that disagree on merged duplicate nodes.
inline void validate_samples(const SamplingSet& s, const Eigen::VectorXd& values) {
    if (values.size() != s.count())
        throw std::invalid_argument("sample vector length does not match node count");
    for (int i = 0; i < s.count(); ++i) {
        int j = s.duplicate_of[i];
        if (j >= 0 && std::abs(values[i] - values[j]) > 1e-9 * (1 + std::abs(values[j])))
            throw std::invalid_argument("conflicting sample values at coincident nodes");
    }
}

/// Q_{Psi,X} f with the Voronoi indicator family: the sample owning x.
inline double quasi_interpolate_Q(const SamplingSet& s, const Eigen::VectorXd& samples, double x,
                                  double y = 0) {
    int owner = s.nearest_node(x, y);
    return samples[owner];
}

/// Default sampling points for S: support midpoints clipped to the domain.
inline std::vector<Point> default_xi(const Basis& basis) {
    std::vector<Point> xs(basis.size());
    for (int k = 0; k < basis.size(); ++k) {
        BoxDomain s = basis.support(k);
        xs[k] = {0.5 * (s.lo[0] + s.hi[0]), basis.dimension() == 2 ? 0.5 * (s.lo[1] + s.hi[1]) : 0.0};
    }
    return xs;
}

/// S_{Phi,Xi} f = 2^{-dj/2} sum_k f(xi_k) phi_{j,k}; xi_k must lie in the
/// support of its element.
inline double quasi_interpolate_S(const Basis& basis, const std::vector<Point>& xi,
                                  const Eigen::VectorXd& samples, double x, double y = 0) {
    if (static_cast<int>(xi.size()) != basis.size() || samples.size() != basis.size())
        throw std::invalid_argument("quasi_interpolate_S: one sample per basis element required");
    double nf = basis.normalization();
    double acc = 0;
    for (int k = 0; k < basis.size(); ++k) acc += samples[k] * basis.evaluate(k, x, y);
    return acc / nf;
}

inline void validate_xi(const Basis& basis, const std::vector<Point>& xi) {
    for (int k = 0; k < basis.size(); ++k) {
        BoxDomain s = basis.support(k);
        if (!s.contains(xi[k][0], basis.dimension() == 2 ? xi[k][1] : s.lo[1]))
            throw std::invalid_argument("sampling point outside the support of its element");
    }
}

/// Oscillation sup_{grid x} max_{grid y in B_delta(x)} |f(x) - f(y)| on an
/// interval domain.
template <typename F>
double oscillation(F&& f, const BoxDomain& dom, double delta, double grid_step) {
    if (dom.dim != 1) throw std::invalid_argument("oscillation: interval domains only");
    if (grid_step > delta / 8 + 1e-15)
        throw std::invalid_argument("oscillation: grid spacing must be <= delta/8");
    int n = static_cast<int>(std::round(dom.length(0) / grid_step));
    std::vector<double> vals(n + 1);
    for (int i = 0; i <= n; ++i) vals[i] = f(dom.lo[0] + dom.length(0) * i / n);
    int w = static_cast<int>(std::floor(delta / (dom.length(0) / n) + 1e-12));
    double worst = 0;
    for (int i = 0; i <= n; ++i) {
        double lo = vals[i], hi = vals[i];
        for (int j = std::max(0, i - w); j <= std::min(n, i + w); ++j) {
            lo = std::min(lo, vals[j]);
            hi = std::max(hi, vals[j]);
        }
        worst = std::max(worst, std::max(hi - vals[i], vals[i] - lo));
    }
    return worst;
}

/// Smooth partition of unity subordinate to the delta-balls: normalized C1
/// bumps w(t) = (1 - t^2)^2 on t = |x - x_l| / delta.
struct SmoothPsi {
    const SamplingSet* set = nullptr;
    double radius = 0;

    double weight(int l, double x, double y = 0) const {
        double dx = set->nodes[l][0] - x;
        double dy = set->dim() == 2 ? set->nodes[l][1] - y : 0.0;
        double t = std::hypot(dx, dy) / radius;
        if (t >= 1.0) return 0.0;
        double u = 1.0 - t * t;
        return u * u;
    }
    double operator()(int l, double x, double y = 0) const {
        if (set->duplicate_of[l] >= 0) return 0.0;
        double wl = weight(l, x, y);
        if (wl == 0.0) return 0.0;
        double tot = 0;
        for (int i = 0; i < set->count(); ++i)
            if (set->duplicate_of[i] < 0) tot += weight(i, x, y);
        return wl / tot;
    }
};

/// Q with the smooth family.
inline double quasi_interpolate_Q_smooth(const SmoothPsi& psi, const Eigen::VectorXd& samples,
                                         double x, double y = 0) {
    double acc = 0;
    for (int l = 0; l < psi.set->count(); ++l) {
        if (psi.set->duplicate_of[l] >= 0) continue;
        double p = psi(l, x, y);
        if (p != 0.0) acc += samples[l] * p;
    }
    return acc;
}

}  // namespace sampler
