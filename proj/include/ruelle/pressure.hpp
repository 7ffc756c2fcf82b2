#pragma once

#include <cstdint>
#include <vector>

#include "ruelle/ifs.hpp"

namespace ruelle {

// Topological pressure P(beta) = Pr(-beta J) estimated from periodic-orbit
// sums S_n = sum over cyclic words of |phi_w'(x_w)|^beta.
struct PressureEstimate {
    double beta = 0.0;
    double value = 0.0;          // accepted estimate log(S_depth / S_{depth-1})
    int orbit_depth = 0;
    double convergence_gap = 0.0; // |estimate(depth) - estimate(depth-1)|
};

struct PressureOptions {
    std::uint64_t orbit_budget = 400000000ULL;
    int threads = 1; // >1 partitions orbit sums by first symbol
};

PressureEstimate pressure(const IfsSystem &ifs, double beta, int depth,
                          const PressureOptions &opt = {});

// Pressure zero located by bisection on [0,1]; P is strictly decreasing.
struct DimensionEstimate {
    double dimension = 0.0;
    double pressure_at_dim = 0.0;
    double uncertainty = 0.0; // propagated pressure convergence gap
    bool bracketed = true;    // false: P(0), P(1) did not bracket a root
    double p_at_0 = 0.0, p_at_1 = 0.0;
};

DimensionEstimate hausdorff_dimension(const IfsSystem &ifs, int depth, double tol,
                                      const PressureOptions &opt = {});

// Independent box-counting oracle: least-squares slope of
// log #(delta-boxes meeting the cover) against log(1/delta).
double box_dimension_estimate(const std::vector<Interval> &cover,
                              const std::vector<double> &delta_grid);

} // namespace ruelle
