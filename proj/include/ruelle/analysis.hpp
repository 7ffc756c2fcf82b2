#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "ruelle/ifs.hpp"
#include "ruelle/transfer.hpp"
#include "ruelle/word.hpp"

namespace ruelle {

// Potential entering the damping function D = Re V - J/2.
struct Potential {
    enum class Kind { GkwA, ReferenceV0, Custom };
    Kind kind = Kind::GkwA;
    double a = 1.0;                      // GkwA: V = (1-a) J, so D = (1/2 - a) J
    std::function<double(double)> re_V;  // Custom: Re V(x)

    static Potential gkw(double a) { return {Kind::GkwA, a, nullptr}; }
    static Potential reference() { return {Kind::ReferenceV0, 0.0, nullptr}; }
    static Potential custom(std::function<double(double)> re_v) {
        return {Kind::Custom, 0.0, std::move(re_v)};
    }
};

// gamma_+ estimated by maximizing Birkhoff averages of D over periodic orbits.
struct DampingProfile {
    std::vector<double> gamma_n;    // per depth 1..max_depth
    std::vector<Word> maximizer_n;  // maximizing cyclic word per depth
    double gamma_plus = 0.0;        // max over depths
};

DampingProfile damping_gamma_plus(const IfsSystem &ifs, const Potential &pot, int max_depth,
                                  std::uint64_t orbit_budget = 400000000ULL);

// Max stable |lambda| for s = a + i b over a b-grid, with the node heuristic
// M(b); entries above the matrix budget are skipped with a notice.
struct GapScanRow {
    double b = 0.0;
    double max_log_modulus = 0.0;
    int M = 0;
    int n_stable = 0;
    bool skipped = false;
};

struct ScanOptions {
    int max_matrix_dim = 2000;
    int refine_step = 8;
    int min_nodes = 24;
};

std::vector<GapScanRow> spectral_radius_scan(const IfsSystem &ifs, double a,
                                             const std::vector<double> &b_grid,
                                             const ScanOptions &opt = {});

// Resonance counting above a log-modulus threshold (stable eigenvalues only).
int weyl_count(const ResonanceSet &res, double log_threshold);

struct WeylRow {
    double b = 0.0;
    int count = 0;
    int M = 0;
};

std::vector<WeylRow> weyl_scan(const IfsSystem &ifs, double a, const std::vector<double> &b_grid,
                               double log_threshold, const ScanOptions &opt = {});

// Least squares of log N(b) against log b.  counts grow like b^dim, so the
// slope is positive; the plotted convention in the source figures negates it.
struct WeylFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0; // rms residual of the fit
};

WeylFit weyl_fit(const std::vector<double> &b_grid, const std::vector<int> &counts);

// Smooth function on I x S^1 given by Fourier modes over |nu| <= window.
struct ExtendedFunction {
    int nu_window = 0;
    // modes[nu + nu_window](x), nu = -window..window
    std::vector<std::function<Complex(double)>> modes;

    const std::function<Complex(double)> &mode(int nu) const { return modes[nu + nu_window]; }
};

struct CorrelationRow {
    int n = 0;
    Complex value{0.0, 0.0};
    Complex leading{0.0, 0.0};
    double residual = 0.0;
};

struct CorrelationReport {
    std::vector<CorrelationRow> rows;
    double fitted_rate = 0.0;   // slope of log|residual| vs n
    double log_lambda1 = 0.0;   // log |second eigenvalue| of the nu = 0 operator
    double lambda0 = 0.0;
    bool window_warning = false; // |nu| = window modes contribute > 1%
    double window_fraction = 0.0;
};

// Correlation sequence <v|F^n u> of the extended transfer operator computed
// by iterating the per-mode collocation matrices; the residual after
// subtracting the leading lambda_0 term is fitted against |lambda_1|.
CorrelationReport correlation_check(const IfsSystem &ifs,
                                    const std::function<Complex(double)> &V,
                                    const std::function<double(double)> &tau,
                                    const ExtendedFunction &u, const ExtendedFunction &v,
                                    int n_max, int nodes_per_interval = 40);

} // namespace ruelle
