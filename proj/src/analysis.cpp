#include "ruelle/analysis.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "ruelle/collocation.hpp"
#include "ruelle/symbolic.hpp"

namespace ruelle {

DampingProfile damping_gamma_plus(const IfsSystem &ifs, const Potential &pot, int max_depth,
                                  std::uint64_t orbit_budget) {
    if (max_depth < 1) throw ConfigError("damping_gamma_plus: max_depth >= 1 required");
    DampingProfile prof;
    prof.gamma_n.reserve(max_depth);
    for (int n = 1; n <= max_depth; ++n) {
        double best = -1e300;
        std::vector<int> best_word;
        for_each_cyclic_word(
            ifs, n,
            [&](const std::vector<int> &sym, const OrbitData &d) {
                // Birkhoff sum of J over the orbit is -log|multiplier|.
                const double ell = -std::log(std::abs(d.multiplier));
                double dsum;
                switch (pot.kind) {
                    case Potential::Kind::GkwA:
                        dsum = (0.5 - pot.a) * ell;
                        break;
                    case Potential::Kind::ReferenceV0:
                        dsum = 0.0;
                        break;
                    case Potential::Kind::Custom: {
                        dsum = -0.5 * ell;
                        for (double x : orbit_points(ifs, sym, d.x)) dsum += pot.re_V(x);
                        break;
                    }
                }
                const double avg = dsum / n;
                if (avg > best) {
                    best = avg;
                    best_word = sym;
                }
            },
            orbit_budget);
        prof.gamma_n.push_back(best);
        prof.maximizer_n.emplace_back(best_word, WordKind::Cyclic);
    }
    prof.gamma_plus = *std::max_element(prof.gamma_n.begin(), prof.gamma_n.end());
    return prof;
}

std::vector<GapScanRow> spectral_radius_scan(const IfsSystem &ifs, double a,
                                             const std::vector<double> &b_grid,
                                             const ScanOptions &opt) {
    for (std::size_t k = 1; k < b_grid.size(); ++k)
        if (b_grid[k] <= b_grid[k - 1])
            throw ConfigError("spectral_radius_scan: b grid must be increasing");
    std::vector<GapScanRow> rows;
    for (double b : b_grid) {
        GapScanRow row;
        row.b = b;
        row.M = std::max(opt.min_nodes, nodes_for_b(ifs, b));
        if (row.M * ifs.size() > opt.max_matrix_dim) {
            row.skipped = true;
            rows.push_back(row);
            continue;
        }
        ResonanceSet rs =
            compute_resonances(ifs, SpectralParams::gkw(a, b), row.M, opt.refine_step);
        row.n_stable = rs.n_stable();
        row.max_log_modulus = std::log(rs.max_stable_modulus());
        rows.push_back(row);
    }
    return rows;
}

int weyl_count(const ResonanceSet &res, double log_threshold) {
    int count = 0;
    for (std::size_t i = 0; i < res.eigenvalues.size(); ++i)
        if (res.stable[i] && std::log(std::abs(res.eigenvalues[i])) > log_threshold) ++count;
    return count;
}

std::vector<WeylRow> weyl_scan(const IfsSystem &ifs, double a, const std::vector<double> &b_grid,
                               double log_threshold, const ScanOptions &opt) {
    std::vector<WeylRow> rows;
    for (double b : b_grid) {
        WeylRow row;
        row.b = b;
        row.M = std::max(opt.min_nodes, nodes_for_b(ifs, b));
        if (row.M * ifs.size() > opt.max_matrix_dim)
            throw BudgetError("weyl_scan: matrix dimension " +
                              std::to_string(row.M * ifs.size()) + " exceeds budget at b = " +
                              std::to_string(b));
        ResonanceSet rs =
            compute_resonances(ifs, SpectralParams::gkw(a, b), row.M, opt.refine_step);
        row.count = weyl_count(rs, log_threshold);
        rows.push_back(row);
    }
    return rows;
}

WeylFit weyl_fit(const std::vector<double> &b_grid, const std::vector<int> &counts) {
    if (b_grid.size() != counts.size()) throw ConfigError("weyl_fit: size mismatch");
    if (b_grid.size() < 5) throw ConfigError("weyl_fit: need at least 5 grid points");
    if (b_grid.back() < 8.0 * b_grid.front())
        throw ConfigError("weyl_fit: grid must span at least a factor 8 in b");
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < b_grid.size(); ++k) {
        if (counts[k] <= 0) continue;
        lx.push_back(std::log(b_grid[k]));
        ly.push_back(std::log(static_cast<double>(counts[k])));
    }
    if (lx.size() < 2) throw NumericalError("weyl_fit: degenerate grid (all counts zero)");
    const auto m = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        sx += lx[k];
        sy += ly[k];
        sxx += lx[k] * lx[k];
        sxy += lx[k] * ly[k];
    }
    WeylFit fit;
    const double denom = m * sxx - sx * sx;
    if (std::abs(denom) < 1e-30) throw NumericalError("weyl_fit: degenerate grid");
    fit.slope = (m * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / m;
    double ss = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        const double r = ly[k] - (fit.slope * lx[k] + fit.intercept);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / m);
    return fit;
}

CorrelationReport correlation_check(const IfsSystem &ifs,
                                    const std::function<Complex(double)> &V,
                                    const std::function<double(double)> &tau,
                                    const ExtendedFunction &u, const ExtendedFunction &v,
                                    int n_max, int nodes_per_interval) {
    if (u.nu_window != v.nu_window)
        throw ConfigError("correlation_check: u and v must share the mode window");
    const int w = u.nu_window;
    const int M = nodes_per_interval;
    CollocationGrid grid(ifs, M);
    const int dim = grid.total_nodes();
    const double pi = std::acos(-1.0);

    // discrete inner product <f|g> = sum conj(f) g quad
    Eigen::VectorXd quad(dim);
    for (int i = 0; i < ifs.size(); ++i)
        for (int k = 0; k < M; ++k) quad[grid.flat_index(i, k)] = grid.quad_weight(i, k);
    auto inner = [&](const Eigen::VectorXcd &f, const Eigen::VectorXcd &g) {
        Complex s = 0.0;
        for (int r = 0; r < dim; ++r) s += std::conj(f[r]) * g[r] * quad[r];
        return s;
    };
    auto sample = [&](const std::function<Complex(double)> &fn) {
        Eigen::VectorXcd out(dim);
        for (int i = 0; i < ifs.size(); ++i)
            for (int k = 0; k < M; ++k) out[grid.flat_index(i, k)] = fn(grid.node(i, k));
        return out;
    };

    CorrelationReport rep;
    rep.rows.resize(n_max);
    for (int n = 0; n < n_max; ++n) rep.rows[n].n = n + 1;

    std::vector<double> mode_contrib(2 * w + 1, 0.0);
    double total_contrib = 0.0;
    Eigen::MatrixXcd C0; // nu = 0 matrix kept for the leading term

    for (int nu = -w; nu <= w; ++nu) {
        SpectralParams params = SpectralParams::general(V, tau, 2.0 * pi * nu);
        TransferMatrix tm = build_matrix(ifs, params, grid);
        if (nu == 0) C0 = tm.mat;
        Eigen::VectorXcd vec = sample(v.mode(nu));
        const Eigen::VectorXcd u_vec = sample(u.mode(nu));
        for (int n = 1; n <= n_max; ++n) {
            vec = tm.mat * vec;
            const Complex contrib = inner(vec, u_vec);
            rep.rows[n - 1].value += contrib;
            mode_contrib[nu + w] += std::abs(contrib);
            total_contrib += std::abs(contrib);
        }
    }
    if (w > 0 && total_contrib > 0.0) {
        rep.window_fraction =
            (mode_contrib[0] + mode_contrib[2 * w]) / total_contrib;
        rep.window_warning = rep.window_fraction > 0.01;
    }

    // Leading term from the nu = 0 eigensystem: <C0^n v|u> = sum_i
    // conj(alpha_i lambda_i^n) <phi_i|u>.
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C0, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success)
        throw NumericalError("correlation_check: eigensolver failed");
    int i0 = 0, i1 = -1;
    for (int i = 1; i < dim; ++i)
        if (std::abs(es.eigenvalues()[i]) > std::abs(es.eigenvalues()[i0])) i0 = i;
    for (int i = 0; i < dim; ++i) {
        if (i == i0) continue;
        if (i1 < 0 || std::abs(es.eigenvalues()[i]) > std::abs(es.eigenvalues()[i1])) i1 = i;
    }
    rep.lambda0 = std::abs(es.eigenvalues()[i0]);
    rep.log_lambda1 = std::log(std::abs(es.eigenvalues()[i1]));

    const Eigen::VectorXcd v0 = sample(v.mode(0)), u0 = sample(u.mode(0));
    const Eigen::VectorXcd alpha = es.eigenvectors().colPivHouseholderQr().solve(v0);
    const Complex lead_coeff =
        std::conj(alpha[i0]) * inner(es.eigenvectors().col(i0), u0);
    const Complex lam0 = es.eigenvalues()[i0];
    for (int n = 1; n <= n_max; ++n) {
        rep.rows[n - 1].leading = std::pow(std::conj(lam0), n) * lead_coeff;
        rep.rows[n - 1].residual = std::abs(rep.rows[n - 1].value - rep.rows[n - 1].leading);
    }

    // Fit the residual decay rate over the window where it is above the
    // numerical floor.
    double scale = 0.0;
    for (const auto &row : rep.rows) scale = std::max(scale, std::abs(row.value));
    std::vector<double> xs, ys;
    for (const auto &row : rep.rows) {
        if (row.residual > 1e-12 * scale && row.residual > 1e-300) {
            xs.push_back(row.n);
            ys.push_back(std::log(row.residual));
        }
    }
    if (xs.size() >= 3) {
        const auto m = static_cast<double>(xs.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t k = 0; k < xs.size(); ++k) {
            sx += xs[k];
            sy += ys[k];
            sxx += xs[k] * xs[k];
            sxy += xs[k] * ys[k];
        }
        rep.fitted_rate = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    } else {
        rep.fitted_rate = 0.0; // residual at solver floor everywhere
    }
    return rep;
}

} // namespace ruelle
