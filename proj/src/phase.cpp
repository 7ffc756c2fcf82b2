#include "ruelle/phase.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "ruelle/symbolic.hpp"

namespace ruelle {

double RoofFunction::at(const BranchMap &branch, double x_source) const {
    switch (kind) {
        case Kind::Zero:
            return 0.0;
        case Kind::Gkw: {
            if (!branch.is_mobius())
                throw ConfigError("RoofFunction: gkw roof needs a Mobius branch");
            const MobiusMap &m = *branch.mobius;
            return -2.0 * m.c * (m.c * x_source + m.d);
        }
        case Kind::Custom:
            return tau_prime(branch(x_source));
    }
    return 0.0;
}

double RoofFunction::max_abs(const IfsSystem &ifs, int samples) const {
    if (kind == Kind::Zero) return 0.0;
    double best = 0.0;
    for (int i = 0; i < ifs.size(); ++i) {
        for (int j = 0; j < ifs.size(); ++j) {
            if (!ifs.admissible(i, j)) continue;
            const BranchMap &b = ifs.branch(i, j);
            const Interval &src = ifs.interval(i);
            for (int k = 0; k < samples; ++k) {
                const double x = src.lo + src.length() * k / (samples - 1.0);
                best = std::max(best, std::abs(at(b, x)));
            }
        }
    }
    return 1.02 * best;
}

PhasePoint canonical_apply(const IfsSystem &ifs, const RoofFunction &roof, int i, int j,
                           const PhasePoint &p) {
    if (!ifs.admissible(i, j))
        throw ConfigError("canonical_apply: transition " + std::to_string(i + 1) + "->" +
                          std::to_string(j + 1) + " not admissible");
    if (!ifs.interval(i).contains(p.x, 1e-12))
        throw ConfigError("canonical_apply: x outside the source interval");
    const BranchMap &b = ifs.branch(i, j);
    PhasePoint out;
    out.x = b(p.x);
    out.xi = p.xi / b.deriv(p.x) + roof.at(b, p.x);
    return out;
}

double default_kappa(const IfsSystem &ifs) { return 0.5 * (1.0 + 1.0 / ifs.theta()); }

double escape_radius(const IfsSystem &ifs, const RoofFunction &roof, double kappa) {
    const double inv_theta = 1.0 / ifs.theta();
    if (!(kappa > 1.0 && kappa < inv_theta))
        throw ConfigError("escape_radius: kappa must lie in (1, 1/theta)");
    return roof.max_abs(ifs) / (inv_theta - kappa);
}

ZetaValue zeta_branch_eval(const IfsSystem &ifs, const RoofFunction &roof,
                           const Word &word_future, double x, int n) {
    if (n < 1) throw ConfigError("zeta_branch_eval: n >= 1 required");
    if (word_future.length() < n + 1)
        throw ConfigError("zeta_branch_eval: future word must have at least n+1 symbols");
    const auto &sym = word_future.symbols;
    if (!ifs.interval(sym[0]).contains(x, 1e-12))
        throw ConfigError("zeta_branch_eval: x outside I_{w_0}");
    double y = x, d = 1.0, acc = 0.0;
    int prev = sym[0];
    for (int k = 1; k <= n; ++k) {
        const BranchMap &b = ifs.branch(prev, sym[k]);
        const double tau_p = roof.at(b, y);
        d *= b.deriv(y);
        y = b(y);
        acc -= d * tau_p;
        prev = sym[k];
    }
    ZetaValue out;
    out.value = acc;
    out.error_bound =
        std::pow(ifs.theta(), n) * roof.max_abs(ifs) / (1.0 - ifs.theta());
    return out;
}

std::vector<TrappedPoint> trapped_set_points(const IfsSystem &ifs, const RoofFunction &roof,
                                             int period, std::uint64_t orbit_budget) {
    std::vector<TrappedPoint> out;
    for_each_cyclic_word(
        ifs, period,
        [&](const std::vector<int> &sym, const OrbitData &d) {
            // One period of the zeta series from the fixed point (in I_{sym.back()});
            // the bi-infinite extension sums to partial / (1 - multiplier).
            double y = d.x, deriv = 1.0, partial = 0.0;
            int prev = sym.back();
            for (int s : sym) {
                const BranchMap &b = ifs.branch(prev, s);
                const double tau_p = roof.at(b, y);
                deriv *= b.deriv(y);
                y = b(y);
                partial -= deriv * tau_p;
                prev = s;
            }
            TrappedPoint tp;
            tp.p.x = d.x;
            tp.p.xi = partial / (1.0 - d.multiplier);
            tp.word = Word(sym, WordKind::Cyclic);
            out.push_back(std::move(tp));
        },
        orbit_budget);
    return out;
}

double eta_transform(const PhasePoint &p, int det_sign) {
    if (p.xi == 0.0) throw NumericalError("eta_transform: xi = 0 is singular");
    return p.x - 2.0 * det_sign / p.xi;
}

double eta_inverse(double x, double eta, int det_sign) {
    if (x == eta) throw NumericalError("eta_inverse: x = eta is singular");
    return 2.0 * det_sign / (x - eta);
}

double phase_dim_estimate(const IfsSystem &ifs, const RoofFunction &roof, int depth,
                          std::uint64_t orbit_budget) {
    if (!ifs.adjacency_symmetric())
        throw ConfigError("phase_dim_estimate: adjacency matrix must be symmetric");
    std::vector<TrappedPoint> pts = trapped_set_points(ifs, roof, depth, orbit_budget);
    if (pts.empty()) throw ConfigError("phase_dim_estimate: no periodic points");

    double x0 = pts[0].p.x, x1 = x0, q0 = pts[0].p.xi, q1 = q0;
    for (const auto &t : pts) {
        x0 = std::min(x0, t.p.x);
        x1 = std::max(x1, t.p.x);
        q0 = std::min(q0, t.p.xi);
        q1 = std::max(q1, t.p.xi);
    }
    const double span = std::max(x1 - x0, q1 - q0) * 1.0000001;
    if (span < 1e-12) return 0.0; // a finite point set

    // Scale window: boxes no finer than the sample resolution theta^depth.
    const int jmax = std::max(
        4, static_cast<int>(std::floor(0.5 * depth * std::log2(1.0 / ifs.theta()))) + 1);
    std::vector<double> lx, lc;
    for (int j = 2; j <= jmax; ++j) {
        const double delta = span / (1 << j);
        std::unordered_set<std::uint64_t> boxes;
        for (const auto &t : pts) {
            const auto ix = static_cast<std::uint64_t>((t.p.x - x0) / delta);
            const auto iq = static_cast<std::uint64_t>((t.p.xi - q0) / delta);
            boxes.insert((ix << 32) | iq);
        }
        lx.push_back(std::log(1.0 / delta));
        lc.push_back(std::log(static_cast<double>(boxes.size())));
    }
    const auto m = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        sx += lx[k];
        sy += lc[k];
        sxx += lx[k] * lx[k];
        sxy += lx[k] * lc[k];
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

} // namespace ruelle
