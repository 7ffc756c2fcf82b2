#pragma once

#include <algorithm>
#include <cmath>

#include "ruelle/errors.hpp"

namespace ruelle {

// Closed interval [lo, hi] on the line, lo < hi.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!(lo < hi)) throw ConfigError("Interval: requires lo < hi");
    }

    double length() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }

    bool contains(double x, double tol = 0.0) const {
        return x >= lo - tol && x <= hi + tol;
    }
    bool strictly_contains(double x) const { return x > lo && x < hi; }

    // [x0,x1] inside the open interval (lo, hi)
    bool strictly_contains(const Interval &other) const {
        return other.lo > lo && other.hi < hi;
    }

    bool overlaps_interior(const Interval &other, double tol = 0.0) const {
        return std::min(hi, other.hi) - std::max(lo, other.lo) > tol;
    }

    static Interval hull_of(double a, double b) {
        return a < b ? Interval(a, b) : Interval(b, a);
    }
};

} // namespace ruelle
