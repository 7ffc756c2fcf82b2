#include "ruelle/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "ruelle/symbolic.hpp"

namespace ruelle {

namespace {

// S_n = sum over cyclic words of length n of |phi_w'(x_w)|^beta.
// Subtotals are formed per first symbol and folded in symbol order, so the
// serial and threaded paths produce bit-identical sums.
double orbit_sum(const IfsSystem &ifs, double beta, int n, const PressureOptions &opt) {
    if (n == 0) return static_cast<double>(ifs.size()); // trace(A^0)
    const std::uint64_t leaves = count_words(ifs, n, WordKind::Cyclic);
    if (leaves > opt.orbit_budget)
        throw BudgetError("pressure: cyclic-word count " + std::to_string(leaves) +
                          " at depth " + std::to_string(n) + " exceeds orbit budget " +
                          std::to_string(opt.orbit_budget));

    const int N = ifs.size();
    std::vector<double> partial(N, 0.0);
    auto task = [&](int s0) {
        double acc = 0.0;
        for_each_cyclic_word_from(ifs, n, s0,
                                  [&](const std::vector<int> &, const OrbitData &d) {
                                      acc += std::exp(beta * std::log(std::abs(d.multiplier)));
                                  });
        return acc;
    };
    if (opt.threads > 1) {
        std::vector<std::future<double>> futs;
        futs.reserve(N);
        for (int s0 = 0; s0 < N; ++s0)
            futs.push_back(std::async(std::launch::async, task, s0));
        for (int s0 = 0; s0 < N; ++s0) partial[s0] = futs[s0].get();
    } else {
        for (int s0 = 0; s0 < N; ++s0) partial[s0] = task(s0);
    }
    double total = 0.0;
    for (int s0 = 0; s0 < N; ++s0) total += partial[s0];
    return total;
}

} // namespace

PressureEstimate pressure(const IfsSystem &ifs, double beta, int depth,
                          const PressureOptions &opt) {
    if (depth < 2) throw ConfigError("pressure: depth >= 2 required");
    const double s2 = orbit_sum(ifs, beta, depth - 2, opt);
    const double s1 = orbit_sum(ifs, beta, depth - 1, opt);
    const double s0 = orbit_sum(ifs, beta, depth, opt);
    PressureEstimate est;
    est.beta = beta;
    est.orbit_depth = depth;
    est.value = std::log(s0 / s1);
    est.convergence_gap = std::abs(est.value - std::log(s1 / s2));
    return est;
}

DimensionEstimate hausdorff_dimension(const IfsSystem &ifs, int depth, double tol,
                                      const PressureOptions &opt) {
    if (!(tol > 0.0)) throw ConfigError("hausdorff_dimension: tol > 0 required");
    DimensionEstimate out;
    PressureEstimate p0 = pressure(ifs, 0.0, depth, opt);
    PressureEstimate p1 = pressure(ifs, 1.0, depth, opt);
    out.p_at_0 = p0.value;
    out.p_at_1 = p1.value;
    if (std::abs(p0.value) <= tol) { // single-orbit systems: P(0) = 0 exactly
        out.dimension = 0.0;
        out.pressure_at_dim = p0.value;
        out.uncertainty = p0.convergence_gap;
        return out;
    }
    if (p0.value < 0.0 || p1.value > 0.0) {
        out.bracketed = false;
        return out;
    }
    double lo = 0.0, hi = 1.0;
    PressureEstimate pm = p0;
    double mid = 0.5;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        pm = pressure(ifs, mid, depth, opt);
        if (std::abs(pm.value) < tol || hi - lo < 1e-12) break;
        if (pm.value > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    out.dimension = mid;
    out.pressure_at_dim = pm.value;
    // Propagate the orbit-sum convergence gap through the local slope of P.
    const double slope = std::abs(p1.value - p0.value); // P is monotone on [0,1]
    out.uncertainty = pm.convergence_gap / std::max(slope, 1e-3) + (hi - lo);
    return out;
}

double box_dimension_estimate(const std::vector<Interval> &cover,
                              const std::vector<double> &delta_grid) {
    if (cover.empty()) throw ConfigError("box_dimension_estimate: empty cover");
    if (delta_grid.size() < 2)
        throw ConfigError("box_dimension_estimate: need at least 2 scales");
    double x0 = cover[0].lo, x1 = cover[0].hi;
    for (const auto &iv : cover) {
        x0 = std::min(x0, iv.lo);
        x1 = std::max(x1, iv.hi);
    }
    const double span = x1 - x0;

    std::vector<double> logs_inv_delta, logs_count;
    for (double delta : delta_grid) {
        if (!(delta > 0.0)) throw ConfigError("box_dimension_estimate: delta must be positive");
        const std::size_t ncell = static_cast<std::size_t>(span / delta) + 2;
        std::vector<char> hit(ncell, 0);
        for (const auto &iv : cover) {
            auto first = static_cast<std::size_t>((iv.lo - x0) / delta);
            auto last = static_cast<std::size_t>((iv.hi - x0) / delta);
            for (std::size_t c = first; c <= last && c < ncell; ++c) hit[c] = 1;
        }
        const auto count = static_cast<double>(std::count(hit.begin(), hit.end(), 1));
        if (count <= 0.0) continue;
        logs_inv_delta.push_back(std::log(1.0 / delta));
        logs_count.push_back(std::log(count));
    }
    if (logs_count.size() < 2)
        throw NumericalError("box_dimension_estimate: fewer than 2 usable scales");

    // least-squares slope
    const auto m = static_cast<double>(logs_count.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < logs_count.size(); ++k) {
        sx += logs_inv_delta[k];
        sy += logs_count[k];
        sxx += logs_inv_delta[k] * logs_inv_delta[k];
        sxy += logs_inv_delta[k] * logs_count[k];
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

} // namespace ruelle
