#pragma once

#include <cmath>
#include <limits>

#include "ruelle/errors.hpp"
#include "ruelle/interval.hpp"

namespace ruelle {

// Fractional-linear map x -> (a x + b)/(c x + d) with a d - b c = +-1.
// Composition is the 2x2 matrix product; the determinant sign is tracked
// exactly and the coefficients are renormalized so |det| stays 1.
struct MobiusMap {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    MobiusMap() = default;
    MobiusMap(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {}

    double det() const { return a * d - b * c; }

    // Throws unless |det| = 1 within tol.
    void require_unimodular(double tol = 1e-12) const {
        if (std::abs(std::abs(det()) - 1.0) > tol)
            throw ConfigError("MobiusMap: |det| must be 1 (got det = " + std::to_string(det()) + ")");
    }

    double operator()(double x) const { return (a * x + b) / (c * x + d); }

    // phi'(x) = det / (c x + d)^2
    double deriv(double x) const {
        const double q = c * x + d;
        return det() / (q * q);
    }

    // Image of the point at infinity.
    double at_infinity() const { return a / c; }
    // Pole (preimage of infinity).
    double pole() const { return -d / c; }
    bool has_pole_in(const Interval &iv) const {
        return c != 0.0 && iv.strictly_contains(-d / c);
    }

    MobiusMap inverse() const {
        const double D = det();
        return MobiusMap(d / D, -b / D, -c / D, a / D);
    }

    // Matrix product, so compose(f, g) acts as f(g(x)).
    static MobiusMap compose(const MobiusMap &f, const MobiusMap &g) {
        MobiusMap h(f.a * g.a + f.b * g.c, f.a * g.b + f.b * g.d,
                    f.c * g.a + f.d * g.c, f.c * g.b + f.d * g.d);
        h.renormalize();
        return h;
    }

    // Rescale so |det| = 1 (the map itself is unchanged).
    void renormalize() {
        const double D = std::abs(det());
        if (D > 0.0 && std::isfinite(D)) {
            const double s = 1.0 / std::sqrt(D);
            a *= s; b *= s; c *= s; d *= s;
        }
    }

    // Monotone image of an interval not containing the pole.
    Interval map_interval(const Interval &iv) const {
        if (has_pole_in(iv))
            throw NumericalError("MobiusMap: interval image crosses the pole");
        return Interval::hull_of((*this)(iv.lo), (*this)(iv.hi));
    }

    // Gauss branch g_j(x) = 1/(x + j), matrix (0 1; 1 j), det = -1.
    static MobiusMap gauss_branch(int j) {
        return MobiusMap(0.0, 1.0, 1.0, static_cast<double>(j));
    }
};

} // namespace ruelle
