#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ruelle/ifs.hpp"
#include "ruelle/word.hpp"

namespace ruelle {

struct PhasePoint {
    double x = 0.0;
    double xi = 0.0;
};

struct PhaseBox {
    Interval x{0.0, 1.0};
    Interval xi{0.0, 1.0};
};

// Derivative of the roof function tau, evaluated at branch images.
//
// The gkw roof tau = -J has the Mobius closed form tau'(phi_{i,j}(x)) =
// -2 c_j (c_j x + d_j), the convention the trapped-set band and captivity
// basins are stated in.
struct RoofFunction {
    enum class Kind { Zero, Gkw, Custom };
    Kind kind = Kind::Gkw;
    std::function<double(double)> tau_prime; // Custom: evaluated at the image point

    static RoofFunction zero() { return {Kind::Zero, nullptr}; }
    static RoofFunction gkw() { return {Kind::Gkw, nullptr}; }
    static RoofFunction custom(std::function<double(double)> tp) {
        return {Kind::Custom, std::move(tp)};
    }

    // tau'(phi(x_source)) for the given branch.
    double at(const BranchMap &branch, double x_source) const;

    // Empirical max |tau'| over branch images, dense sampling plus 2% margin.
    double max_abs(const IfsSystem &ifs, int samples = 2048) const;
};

// One step of the canonical map F_{i,j}(x, xi) = (phi(x), xi/phi'(x) + tau'(x')).
PhasePoint canonical_apply(const IfsSystem &ifs, const RoofFunction &roof, int i, int j,
                           const PhasePoint &p);

// R = (1/theta - kappa)^{-1} max|tau'| with margin; outside |xi| > R every
// branch expands |xi| by at least kappa.
double escape_radius(const IfsSystem &ifs, const RoofFunction &roof, double kappa);
// Midpoint default kappa = (1 + 1/theta)/2.
double default_kappa(const IfsSystem &ifs);

// Truncated branch function zeta_w(x) = -sum_{k>=1} phi'_{w_{0,k}}(x) tau'(phi_{w_{0,k}}(x)).
// Future words carry the base interval as their first symbol; n terms are
// summed and the geometric tail theta^n max|tau'|/(1-theta) is reported.
struct ZetaValue {
    double value = 0.0;
    double error_bound = 0.0;
};

ZetaValue zeta_branch_eval(const IfsSystem &ifs, const RoofFunction &roof,
                           const Word &word_future, double x, int n);

// Evaluator wrapper for a fixed future word and truncation.
struct ZetaBranch {
    const IfsSystem *ifs = nullptr;
    RoofFunction roof;
    Word word;
    int truncation = 0;

    ZetaValue operator()(double x) const {
        return zeta_branch_eval(*ifs, roof, word, x, truncation);
    }
};

// Periodic points of the phase-space trapped set: for each cyclic word the
// point (x_w, zeta of the bi-infinite periodic extension), evaluated in
// closed form (one-period sum / (1 - multiplier)).
struct TrappedPoint {
    PhasePoint p;
    Word word;
};

std::vector<TrappedPoint> trapped_set_points(const IfsSystem &ifs, const RoofFunction &roof,
                                             int period,
                                             std::uint64_t orbit_budget = 400000000ULL);

// Coordinate change eta = x - 2D/xi and its inverse xi = 2D/(x - eta).
double eta_transform(const PhasePoint &p, int det_sign);
double eta_inverse(double x, double eta, int det_sign);

// 2D box-count slope over the phase trapped set sampled by periodic points;
// requires a symmetric adjacency matrix.
double phase_dim_estimate(const IfsSystem &ifs, const RoofFunction &roof, int depth,
                          std::uint64_t orbit_budget = 400000000ULL);

} // namespace ruelle
