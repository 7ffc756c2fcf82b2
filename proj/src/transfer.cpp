#include "ruelle/transfer.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "quad_refine.hpp"
#include "ruelle/symbolic.hpp"

namespace ruelle {

namespace {

Complex branch_weight(const SpectralParams &p, const BranchMap &b, double y) {
    const double dphi = b.deriv(y);
    if (p.mode == SpectralParams::Mode::Gkw) {
        // |phi'(y)|^s
        return std::exp(p.s() * std::log(std::abs(dphi)));
    }
    const double x_img = b(y);
    Complex w = std::abs(dphi);
    if (p.V) w *= std::exp(p.V(x_img));
    if (p.tau) w *= std::exp(Complex(0.0, -p.b * p.tau(x_img)));
    return w;
}

} // namespace

TransferMatrix build_matrix(const IfsSystem &ifs, const SpectralParams &params,
                            const CollocationGrid &grid) {
    const int N = ifs.size();
    const int M = grid.nodes_per_interval();
    const int dim = N * M;
    TransferMatrix tm;
    tm.params = params;
    tm.nodes_per_interval = M;
    tm.mat = Eigen::MatrixXcd::Zero(dim, dim);

    std::vector<double> row(M);
    for (int i = 0; i < N; ++i) {
        for (int k = 0; k < M; ++k) {
            const double y = grid.node(i, k);
            const int r = grid.flat_index(i, k);
            for (int j = 0; j < N; ++j) {
                if (!ifs.admissible(i, j)) continue;
                const BranchMap &b = ifs.branch(i, j);
                const double x_img = b(y);
                if (!ifs.interval(j).contains(x_img))
                    throw NumericalError("build_matrix: image of node under branch " +
                                         std::to_string(i + 1) + "->" + std::to_string(j + 1) +
                                         " leaves the target interval (would extrapolate)");
                const Complex w = branch_weight(params, b, y);
                grid.basis_row(j, x_img, row);
                for (int l = 0; l < M; ++l) tm.mat(r, grid.flat_index(j, l)) = w * row[l];
            }
        }
    }
    return tm;
}

TransferMatrix build_matrix(const IfsSystem &ifs, const SpectralParams &params,
                            int nodes_per_interval) {
    CollocationGrid grid(ifs, nodes_per_interval);
    return build_matrix(ifs, params, grid);
}

namespace {

// Dimension up to which eigenvalues are polished by quad-precision inverse
// iteration.  The deep spectrum of these non-normal matrices carries
// condition numbers growing geometrically, so double-precision QR (and the
// double-rounded entries themselves) lose the small eigenvalues; the
// mixed-precision pass restores them.
constexpr int kQuadRefineDim = 160;
constexpr int kQuadRefineCount = 24;

std::vector<Complex> sorted_eigenvalues(const IfsSystem &ifs, const SpectralParams &params,
                                        int M, const Eigen::MatrixXcd &m) {
    const int n = static_cast<int>(m.rows());
    const bool refine =
        n <= kQuadRefineDim && params.mode == SpectralParams::Mode::Gkw && ifs.all_mobius();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, /*computeEigenvectors=*/refine);
    if (es.info() != Eigen::Success)
        throw NumericalError("eigensolver failed on a " + std::to_string(m.rows()) + "^2 matrix");
    std::vector<Complex> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
    if (refine) {
        std::vector<int> idx(n);
        for (int i = 0; i < n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(),
                  [&](int a, int b) { return std::abs(ev[a]) > std::abs(ev[b]); });
        const double lam0 = std::abs(ev[idx[0]]);
        std::vector<int> order;
        for (int i = 0; i < n && static_cast<int>(order.size()) < kQuadRefineCount; ++i)
            if (std::abs(ev[idx[i]]) >= 1e-8 * lam0) order.push_back(idx[i]);
        detail::refine_eigenvalues_quad(ifs, params.a, params.b, M, ev, es.eigenvectors(),
                                        order);
    }
    std::sort(ev.begin(), ev.end(),
              [](const Complex &u, const Complex &v) { return std::abs(u) > std::abs(v); });
    return ev;
}

} // namespace

int ResonanceSet::n_stable() const {
    int n = 0;
    for (bool s : stable) n += s ? 1 : 0;
    return n;
}

double ResonanceSet::max_stable_modulus() const {
    for (std::size_t i = 0; i < eigenvalues.size(); ++i)
        if (stable[i]) return std::abs(eigenvalues[i]); // sorted descending
    return 0.0;
}

ResonanceSet resonances(const IfsSystem &ifs, const TransferMatrix &matrix, int refine_step) {
    if (refine_step < 2) throw ConfigError("resonances: refinement step >= 2 required");
    ResonanceSet rs;
    rs.params = matrix.params;
    rs.M = matrix.nodes_per_interval;
    rs.refined_M = rs.M + refine_step;
    rs.eigenvalues = sorted_eigenvalues(ifs, matrix.params, rs.M, matrix.mat);

    TransferMatrix refined = build_matrix(ifs, matrix.params, rs.refined_M);
    const std::vector<Complex> refined_ev =
        sorted_eigenvalues(ifs, matrix.params, rs.refined_M, refined.mat);

    rs.stable.assign(rs.eigenvalues.size(), false);
    for (std::size_t i = 0; i < rs.eigenvalues.size(); ++i) {
        const Complex lam = rs.eigenvalues[i];
        double best = 1e300;
        for (const Complex &mu : refined_ev) best = std::min(best, std::abs(lam - mu));
        rs.stable[i] = best <= std::max(1e-8, 1e-6 * std::abs(lam));
    }
    return rs;
}

ResonanceSet compute_resonances(const IfsSystem &ifs, const SpectralParams &params, int M,
                                int refine_step) {
    TransferMatrix tm = build_matrix(ifs, params, M);
    return resonances(ifs, tm, refine_step);
}

int nodes_for_b(const IfsSystem &ifs, double b) {
    double maxlen = 0.0;
    for (const auto &iv : ifs.intervals()) maxlen = std::max(maxlen, iv.length());
    return std::max(24, static_cast<int>(std::ceil(1.5 * std::abs(b) * maxlen)));
}

Complex flat_trace(const IfsSystem &ifs, const SpectralParams &params, int n,
                   std::uint64_t orbit_budget) {
    if (n < 1) throw ConfigError("flat_trace: n >= 1 required");
    Complex total = 0.0;
    const bool gkw = params.mode == SpectralParams::Mode::Gkw;
    for_each_cyclic_word(
        ifs, n,
        [&](const std::vector<int> &sym, const OrbitData &d) {
            Complex w;
            if (gkw) {
                w = std::exp(params.s() * std::log(std::abs(d.multiplier)));
            } else {
                w = std::abs(d.multiplier);
                const std::vector<double> pts = orbit_points(ifs, sym, d.x);
                Complex expo = 0.0;
                for (double x : pts) {
                    if (params.V) expo += params.V(x);
                    if (params.tau) expo += Complex(0.0, -params.b * params.tau(x));
                }
                w *= std::exp(expo);
            }
            total += w / std::abs(1.0 - d.multiplier);
        },
        orbit_budget);
    return total;
}

DeterminantValue dynamical_determinant(const IfsSystem &ifs, const SpectralParams &params,
                                       Complex z, int n_max, std::uint64_t orbit_budget) {
    if (n_max < 4) throw ConfigError("dynamical_determinant: n_max >= 4 required");
    DeterminantValue dv;
    if (z == Complex(0.0, 0.0)) return dv; // d(0,s) = 1 exactly
    Complex acc = 0.0;
    Complex zn = 1.0;
    double prev1 = -1.0, prev2 = -1.0;
    for (int n = 1; n <= n_max; ++n) {
        zn *= z;
        const Complex term = zn / static_cast<double>(n) * flat_trace(ifs, params, n, orbit_budget);
        acc += term;
        const double mag = std::abs(term);
        if (n == n_max) {
            dv.last_term_magnitude = mag;
            dv.diverging = prev2 >= 0.0 && prev1 > prev2 && mag > prev1;
        }
        prev2 = prev1;
        prev1 = mag;
    }
    dv.value = std::exp(-acc);
    return dv;
}

Complex matrix_determinant(const TransferMatrix &matrix, Complex z) {
    const Eigen::MatrixXcd A =
        Eigen::MatrixXcd::Identity(matrix.mat.rows(), matrix.mat.cols()) - z * matrix.mat;
    return Eigen::PartialPivLU<Eigen::MatrixXcd>(A).determinant();
}

} // namespace ruelle
