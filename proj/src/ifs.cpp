#include "ruelle/ifs.hpp"

#include <algorithm>
#include <cmath>

namespace ruelle {

IfsSystem::IfsSystem(std::vector<Interval> intervals,
                     std::vector<std::vector<int>> adjacency,
                     std::vector<BranchMap> branches,
                     double theta,
                     std::string kind)
    : intervals_(std::move(intervals)),
      adjacency_(std::move(adjacency)),
      theta_(theta),
      kind_(std::move(kind)) {
    const int n = static_cast<int>(intervals_.size());
    if (n == 0) throw ConfigError("IfsSystem: needs at least one interval");
    if (static_cast<int>(adjacency_.size()) != n)
        throw ConfigError("IfsSystem: adjacency size mismatch");
    for (const auto &row : adjacency_)
        if (static_cast<int>(row.size()) != n)
            throw ConfigError("IfsSystem: adjacency row size mismatch");
    if (!(theta_ > 0.0 && theta_ < 1.0))
        throw ConfigError("IfsSystem: theta must lie in (0,1)");

    branches_.assign(static_cast<std::size_t>(n) * n, std::nullopt);
    for (auto &b : branches) {
        if (b.source < 0 || b.source >= n || b.target < 0 || b.target >= n)
            throw ConfigError("IfsSystem: branch index out of range");
        if (!adjacency_[b.source][b.target])
            throw ConfigError("IfsSystem: branch on a forbidden transition");
        all_mobius_ = all_mobius_ && b.is_mobius();
        branches_[static_cast<std::size_t>(b.source) * n + b.target] = std::move(b);
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (adjacency_[i][j] && !branches_[static_cast<std::size_t>(i) * n + j])
                throw ConfigError("IfsSystem: missing branch for admissible transition " +
                                  std::to_string(i + 1) + "->" + std::to_string(j + 1));
}

const BranchMap &IfsSystem::branch(int i, int j) const {
    const auto &b = branches_.at(static_cast<std::size_t>(i) * size() + j);
    if (!b) throw ConfigError("IfsSystem: no branch " + std::to_string(i + 1) + "->" +
                              std::to_string(j + 1));
    return *b;
}

int IfsSystem::interval_of(double x, double tol) const {
    for (int i = 0; i < size(); ++i)
        if (intervals_[i].contains(x, tol)) return i;
    return -1;
}

bool IfsSystem::adjacency_symmetric() const {
    for (int i = 0; i < size(); ++i)
        for (int j = i + 1; j < size(); ++j)
            if (adjacency_[i][j] != adjacency_[j][i]) return false;
    return true;
}

IfsSystem build_gauss_ifs(int n_branches) {
    if (n_branches < 1) throw ConfigError("build_gauss_ifs: n_branches >= 1 required");
    const int N = n_branches;
    std::vector<Interval> intervals;
    intervals.reserve(N);
    // I_i = [a_i, b_i] with a_i = 1/(1+i), alpha_i = G_i^{-1}(1/(N+1)) and
    // b_i chosen at the midpoint of the allowed range (alpha_i, 1/i).
    for (int i = 1; i <= N; ++i) {
        const double a_i = 1.0 / (1.0 + i);
        const double alpha_i = 1.0 / (1.0 / (N + 1.0) + i);
        const double b_i = 0.5 * (alpha_i + 1.0 / i);
        intervals.emplace_back(a_i, b_i);
    }

    std::vector<std::vector<int>> adjacency(N, std::vector<int>(N, 1));
    std::vector<BranchMap> branches;
    branches.reserve(static_cast<std::size_t>(N) * N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            branches.push_back(BranchMap::from_mobius(i, j, MobiusMap::gauss_branch(j + 1)));

    // sup |g_j'| = 1/(x+j)^2 over I is attained by g_1 at the left endpoint
    // of I_N, the smallest point a_N = 1/(N+1).
    const double a_N = intervals.back().lo;
    const double sup_deriv = 1.0 / ((a_N + 1.0) * (a_N + 1.0));
    IfsSystem ifs(std::move(intervals), std::move(adjacency), std::move(branches),
                  1.02 * sup_deriv, "gauss");
    ifs.set_meta_n(N);
    return ifs;
}

IfsSystem build_schottky_ifs(const std::vector<MobiusMap> &generators,
                             const std::vector<Interval> &half_disc_intervals) {
    const int r = static_cast<int>(generators.size());
    if (r < 1) throw ConfigError("build_schottky_ifs: needs at least one generator");
    const int N = 2 * r;
    if (static_cast<int>(half_disc_intervals.size()) != N)
        throw ConfigError("build_schottky_ifs: expected 2r intervals for r generators");

    // Cyclic convention S_{i+r} = S_i^{-1}, indices mod N.
    std::vector<MobiusMap> S(N);
    for (int i = 0; i < r; ++i) {
        generators[i].require_unimodular();
        S[i] = generators[i];
        S[i + r] = generators[i].inverse();
    }

    // S_i must carry the boundary of D_i to the boundary of D_{i+r}.
    const double tol = 1e-9;
    for (int i = 0; i < N; ++i) {
        const Interval &src = half_disc_intervals[i];
        const Interval &dst = half_disc_intervals[(i + r) % N];
        const double u = S[i](src.lo), v = S[i](src.hi);
        const bool forward = std::abs(u - dst.lo) < tol && std::abs(v - dst.hi) < tol;
        const bool reversed = std::abs(u - dst.hi) < tol && std::abs(v - dst.lo) < tol;
        if (!forward && !reversed)
            throw ConfigError("build_schottky_ifs: S_" + std::to_string(i + 1) +
                              " does not map its disc boundary onto disc " +
                              std::to_string((i + r) % N + 1));
    }

    std::vector<std::vector<int>> adjacency(N, std::vector<int>(N, 1));
    for (int i = 0; i < N; ++i) adjacency[i][(i + r) % N] = 0;

    // phi_{i,j} = S_j^{-1} = S_{j+r} restricted to I_i.
    std::vector<BranchMap> branches;
    double sup_deriv = 0.0;
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            if (!adjacency[i][j]) continue;
            const MobiusMap &g = S[(j + r) % N];
            const Interval &src = half_disc_intervals[i];
            const Interval &dst = half_disc_intervals[j];
            Interval img = g.map_interval(src);
            if (!dst.strictly_contains(img))
                throw ConfigError("build_schottky_ifs: image of I_" + std::to_string(i + 1) +
                                  " under S_" + std::to_string(j + 1) +
                                  "^{-1} is not strictly inside I_" + std::to_string(j + 1));
            // |phi'| is monotone on an interval avoiding the pole.
            const double m = std::max(std::abs(g.deriv(src.lo)), std::abs(g.deriv(src.hi)));
            if (m >= 1.0)
                throw ConfigError("build_schottky_ifs: S_" + std::to_string(j + 1) +
                                  " is not expanding over I_" + std::to_string(i + 1));
            sup_deriv = std::max(sup_deriv, m);
            branches.push_back(BranchMap::from_mobius(i, j, g));
        }
    }

    IfsSystem ifs(half_disc_intervals, std::move(adjacency), std::move(branches),
                  std::min(1.02 * sup_deriv, 0.999), "schottky");
    ifs.set_meta_n(r);
    ifs.set_generators(generators);
    return ifs;
}

IfsSystem build_schottky_example() {
    const double r5 = std::sqrt(5.0);
    const MobiusMap S1(4.0, r5, -r5, -1.0);
    const MobiusMap S2(-1.0, r5, -r5, 4.0);
    // The isometric-circle discs of S1^{-1} and S2^{-1} touch at x = 0 where
    // |S'| = 1, so the generators are not strictly expanding there.  The disc
    // radii are free data: shrinking those two localizes the intervals toward
    // the limit set and restores a strict contraction margin; their partners
    // are the exact boundary images, keeping S_i(dD_i) = dD_{i+r}.
    const double shrink = 0.75;
    auto iso = [&](const MobiusMap &S) {
        const double ctr = -S.d / S.c, rad = shrink / std::abs(S.c);
        return Interval(ctr - rad, ctr + rad);
    };
    const Interval I1 = iso(S1);            // disc of S1, left of 0
    const Interval I4 = iso(S2.inverse());  // disc of S2^{-1}, right of 0
    const Interval I3 = Interval::hull_of(S1(I1.lo), S1(I1.hi));
    const Interval I2 = Interval::hull_of(S2.inverse()(I4.lo), S2.inverse()(I4.hi));
    return build_schottky_ifs({S1, S2}, {I1, I2, I3, I4});
}

VerifyReport verify_ifs(const IfsSystem &ifs, int samples_per_interval) {
    if (samples_per_interval < 2)
        throw ConfigError("verify_ifs: samples_per_interval >= 2 required");
    VerifyReport rep;
    const int N = ifs.size();

    // (a) pairwise disjointness of the base intervals. Touching endpoints are
    // allowed (the Schottky construction produces them); interiors must not overlap.
    rep.intervals_disjoint = true;
    for (int i = 0; i < N && rep.intervals_disjoint; ++i)
        for (int j = i + 1; j < N; ++j)
            if (ifs.interval(i).overlaps_interior(ifs.interval(j))) {
                rep.intervals_disjoint = false;
                rep.first_violation = "intervals not disjoint (I_" + std::to_string(i + 1) +
                                      ", I_" + std::to_string(j + 1) + ")";
                rep.witness = std::max(ifs.interval(i).lo, ifs.interval(j).lo);
                break;
            }

    // (b) branch images strictly inside target interiors, (c) empirical sup |phi'|.
    rep.images_inside = true;
    std::vector<std::pair<std::pair<int, int>, Interval>> images;
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            if (!ifs.admissible(i, j)) continue;
            const BranchMap &b = ifs.branch(i, j);
            const Interval &src = ifs.interval(i);
            const Interval &dst = ifs.interval(j);
            double lo = 1e300, hi = -1e300;
            for (int k = 0; k < samples_per_interval; ++k) {
                const double x = src.lo + src.length() * k / (samples_per_interval - 1.0);
                const double y = b(x);
                lo = std::min(lo, y);
                hi = std::max(hi, y);
                rep.sup_abs_deriv = std::max(rep.sup_abs_deriv, std::abs(b.deriv(x)));
                if (rep.images_inside && !dst.strictly_contains(y)) {
                    rep.images_inside = false;
                    if (rep.first_violation.empty()) {
                        rep.first_violation = "branch image escapes interior (" +
                                              std::to_string(i + 1) + "->" + std::to_string(j + 1) + ")";
                        rep.witness = x;
                    }
                }
            }
            images.push_back({{i, j}, Interval::hull_of(lo, hi)});
        }
    }
    rep.theta = 1.02 * rep.sup_abs_deriv;

    // (d) distinct branch images pairwise disjoint.
    rep.images_disjoint = true;
    for (std::size_t p = 0; p < images.size() && rep.images_disjoint; ++p)
        for (std::size_t q = p + 1; q < images.size(); ++q)
            if (images[p].second.overlaps_interior(images[q].second)) {
                rep.images_disjoint = false;
                if (rep.first_violation.empty()) {
                    rep.first_violation = "branch images overlap (" +
                                          std::to_string(images[p].first.first + 1) + "->" +
                                          std::to_string(images[p].first.second + 1) + " vs " +
                                          std::to_string(images[q].first.first + 1) + "->" +
                                          std::to_string(images[q].first.second + 1) + ")";
                    rep.witness = std::max(images[p].second.lo, images[q].second.lo);
                }
                break;
            }

    const bool contracting = rep.theta < 1.0;
    if (!contracting && rep.first_violation.empty()) {
        rep.first_violation = "no theta < 1 (sup|phi'| = " + std::to_string(rep.sup_abs_deriv) + ")";
    }
    rep.pass = rep.intervals_disjoint && rep.images_inside && rep.images_disjoint && contracting;
    return rep;
}

} // namespace ruelle
