#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace sampler {

/// 8-point Gauss-Legendre rule on [-1, 1]; exact through degree 15.
struct GaussLegendre8 {
    static constexpr std::array<double, 8> nodes = {
        -0.96028985649753623168, -0.79666647741362673959, -0.52553240991632898582,
        -0.18343464249564980494, 0.18343464249564980494,  0.52553240991632898582,
        0.79666647741362673959,  0.96028985649753623168};
    static constexpr std::array<double, 8> weights = {
        0.10122853629037625915, 0.22238103445337447054, 0.31370664587788728734,
        0.36268378337836198297, 0.36268378337836198297, 0.31370664587788728734,
        0.22238103445337447054, 0.10122853629037625915};
};

/// Composite Gauss-Legendre over [a, b] split at the given breakpoints
/// (breakpoints outside (a, b) are ignored).
template <typename F>
double integrate_composite(F&& f, double a, double b, const std::vector<double>& breaks) {
    if (!(b > a)) return 0.0;
    std::vector<double> pts{a, b};
    for (double t : breaks)
        if (t > a && t < b) pts.push_back(t);
    std::sort(pts.begin(), pts.end());
    double acc = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        double lo = pts[i], hi = pts[i + 1];
        if (hi - lo < 1e-15) continue;
        double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        double cell = 0.0;
        for (int g = 0; g < 8; ++g)
            cell += GaussLegendre8::weights[g] * f(mid + half * GaussLegendre8::nodes[g]);
        acc += half * cell;
    }
    return acc;
}

/// Composite Gauss-Legendre over [a, b] on uniformly spaced subcells anchored
/// at `anchor` with spacing `step` (the dyadic evaluation grid).
template <typename F>
double integrate_on_grid(F&& f, double a, double b, double anchor, double step) {
    if (!(b > a)) return 0.0;
    long i0 = static_cast<long>(std::floor((a - anchor) / step));
    long i1 = static_cast<long>(std::ceil((b - anchor) / step));
    double acc = 0.0;
    for (long i = i0; i < i1; ++i) {
        double clo = std::max(anchor + i * step, a);
        double chi = std::min(anchor + (i + 1) * step, b);
        if (chi - clo < 1e-15) continue;
        double mid = 0.5 * (clo + chi), half = 0.5 * (chi - clo);
        double cell = 0.0;
        for (int g = 0; g < 8; ++g)
            cell += GaussLegendre8::weights[g] * f(mid + half * GaussLegendre8::nodes[g]);
        acc += half * cell;
    }
    return acc;
}

}  // namespace sampler
