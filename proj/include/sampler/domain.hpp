#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace sampler {

/// Interval (d=1) or axis-aligned rectangle (d=2).
struct BoxDomain {
    int dim = 1;
    std::array<double, 2> lo{0, 0};
    std::array<double, 2> hi{1, 0};

    static BoxDomain interval(double a, double b) {
        if (!(b > a)) throw std::invalid_argument("BoxDomain: need b > a");
        return BoxDomain{1, {a, 0}, {b, 0}};
    }
    static BoxDomain rectangle(double ax, double bx, double ay, double by) {
        if (!(bx > ax) || !(by > ay)) throw std::invalid_argument("BoxDomain: need positive extents");
        return BoxDomain{2, {ax, ay}, {bx, by}};
    }

    double length(int axis) const { return hi[axis] - lo[axis]; }
    double measure() const { return dim == 1 ? length(0) : length(0) * length(1); }
    double diameter() const {
        return dim == 1 ? length(0) : std::hypot(length(0), length(1));
    }
    bool contains(double x, double y = 0) const {
        if (x < lo[0] || x > hi[0]) return false;
        return dim == 1 || (y >= lo[1] && y <= hi[1]);
    }
    BoxDomain axis_interval(int axis) const { return interval(lo[axis], hi[axis]); }
};

}  // namespace sampler
