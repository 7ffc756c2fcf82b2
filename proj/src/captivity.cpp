#include "ruelle/captivity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "ruelle/symbolic.hpp"

namespace ruelle {

const char *to_string(CaptivityVerdict v) {
    switch (v) {
        case CaptivityVerdict::Captive: return "captive";
        case CaptivityVerdict::Violated: return "violated";
        case CaptivityVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

// Shared state for walking the future tree with certified zeta enclosures.
struct FutureWalker {
    const IfsSystem &ifs;
    const RoofFunction &roof;
    int depth_a;
    double R;      // escape radius
    double C1;     // bound on |d zeta/dx|
    double maxtau; // max |tau'|
    double theta;

    // chains at the two x-interval endpoints
    struct Chain {
        double y0, y1; // current images
        double d0, d1; // accumulated derivatives
        double z0, z1; // partial zeta values
    };

    // Counts future words from `start` whose cell tube over x_iv could meet
    // xi_iv; stops at `limit`.  Conservative: never prunes a true meet.
    int count_meets(int start, const Interval &x_iv, const Interval &xi_iv, int limit) const {
        Chain c{x_iv.lo, x_iv.hi, 1.0, 1.0, 0.0, 0.0};
        int count = 0;
        descend(start, c, 0, x_iv.length(), xi_iv, limit, count, nullptr);
        return count;
    }

    // Enumerates all depth-a future words from `start` with their cell
    // xi-enclosures over x_iv (no pruning).
    void cells(int start, const Interval &x_iv,
               const std::function<void(const std::vector<int> &, const Interval &)> &f) const {
        Chain c{x_iv.lo, x_iv.hi, 1.0, 1.0, 0.0, 0.0};
        std::vector<int> word;
        collect(start, c, 0, x_iv.length(), word, f);
    }

  private:
    double node_halfwidth(double dmax, double w, bool leaf) const {
        const double eps = 1e-12 * (1.0 + R);
        if (leaf) return 1.05 * dmax * R + C1 * w + eps;
        // subtree center drift + deepest tube width
        return 1.15 * dmax * (theta * maxtau / (1.0 - theta) + theta * R) + C1 * w + eps;
    }

    void descend(int sym, const Chain &c, int k, double w, const Interval &xi_iv, int limit,
                 int &count, const std::vector<int> *unused) const {
        (void)unused;
        const double zmin = std::min(c.z0, c.z1), zmax = std::max(c.z0, c.z1);
        const double dmax = std::max(std::abs(c.d0), std::abs(c.d1));
        const double H = node_halfwidth(dmax, w, k == depth_a);
        if (xi_iv.lo > zmax + H || xi_iv.hi < zmin - H) return; // certified miss
        if (k == depth_a) {
            ++count;
            return;
        }
        for (int t = 0; t < ifs.size() && count < limit; ++t) {
            if (!ifs.admissible(sym, t)) continue;
            descend(t, advance(sym, t, c), k + 1, w, xi_iv, limit, count, nullptr);
        }
    }

    void collect(int sym, const Chain &c, int k, double w, std::vector<int> &word,
                 const std::function<void(const std::vector<int> &, const Interval &)> &f) const {
        if (k == depth_a) {
            const double zmin = std::min(c.z0, c.z1), zmax = std::max(c.z0, c.z1);
            const double dmax = std::max(std::abs(c.d0), std::abs(c.d1));
            const double H = node_halfwidth(dmax, w, true);
            f(word, Interval(zmin - H, zmax + H));
            return;
        }
        for (int t = 0; t < ifs.size(); ++t) {
            if (!ifs.admissible(sym, t)) continue;
            word.push_back(t);
            collect(t, advance(sym, t, c), k + 1, w, word, f);
            word.pop_back();
        }
    }

    Chain advance(int sym, int t, const Chain &c) const {
        const BranchMap &b = ifs.branch(sym, t);
        Chain n;
        const double tp0 = roof.at(b, c.y0), tp1 = roof.at(b, c.y1);
        n.d0 = c.d0 * b.deriv(c.y0);
        n.d1 = c.d1 * b.deriv(c.y1);
        n.y0 = b(c.y0);
        n.y1 = b(c.y1);
        n.z0 = c.z0 - n.d0 * tp0;
        n.z1 = c.z1 - n.d1 * tp1;
        return n;
    }

  public:
    // Exact pointwise membership: is (x, xi) inside the tube of some depth-a
    // future word from `start`?  tol_pad widens (>0) or shrinks (<0) the tube.
    bool point_in_cell(int start, double x, double xi, double tol_pad) const {
        return point_descend(start, x, 1.0, 0.0, 0, xi, tol_pad);
    }

  private:
    bool point_descend(int sym, double y, double d, double z, int k, double xi,
                       double tol_pad) const {
        if (k == depth_a) return std::abs(xi - z) <= std::abs(d) * R + tol_pad;
        // prune with the node enclosure
        const double H = node_halfwidth(std::abs(d), 0.0, false) + std::abs(tol_pad);
        if (std::abs(xi - z) > H) return false;
        for (int t = 0; t < ifs.size(); ++t) {
            if (!ifs.admissible(sym, t)) continue;
            const BranchMap &b = ifs.branch(sym, t);
            const double tp = roof.at(b, y);
            const double nd = d * b.deriv(y);
            if (point_descend(t, b(y), nd, z - nd * tp, k + 1, xi, tol_pad)) return true;
        }
        return false;
    }
};

// Deterministic empirical bound on |zeta'(x)|, sampled over spread future
// words with finite differences, with a 1.5x margin.
double zeta_slope_bound(const IfsSystem &ifs, const RoofFunction &roof) {
    if (roof.kind == RoofFunction::Kind::Zero) return 0.0;
    const int N = ifs.size();
    const int len = 12;
    double best = 0.0;
    for (int m = 0; m < N; ++m) {
        for (int first = 0; first < N; ++first) {
            if (!ifs.admissible(m, first)) continue;
            for (int step = 0; step < 2; ++step) {
                std::vector<int> word{m, first};
                int prev = first;
                bool dead_end = false;
                while (static_cast<int>(word.size()) < len + 1) {
                    int t = (prev + step) % N, tries = 0;
                    while (!ifs.admissible(prev, t) && tries++ < N) t = (t + 1) % N;
                    if (tries > N) {
                        dead_end = true;
                        break;
                    }
                    word.push_back(t);
                    prev = t;
                }
                if (dead_end) continue;
                Word w(word, WordKind::Future);
                const Interval &iv = ifs.interval(m);
                const double h = iv.length() / 64.0;
                for (int q = 1; q < 7; ++q) {
                    const double x = iv.lo + iv.length() * q / 7.0;
                    const double zp = zeta_branch_eval(ifs, roof, w, x + h, len).value;
                    const double zm = zeta_branch_eval(ifs, roof, w, x - h, len).value;
                    best = std::max(best, std::abs(zp - zm) / (2.0 * h));
                }
            }
        }
    }
    return 1.5 * best;
}

std::uint64_t count_cells(const IfsSystem &ifs, int a) {
    const int N = ifs.size();
    // paths of length a: P = A^a
    std::vector<std::vector<std::uint64_t>> P(N, std::vector<std::uint64_t>(N, 0)), A = P;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) A[i][j] = ifs.admissible(i, j) ? 1 : 0;
    for (int i = 0; i < N; ++i) P[i][i] = 1;
    for (int k = 0; k < a; ++k) {
        std::vector<std::vector<std::uint64_t>> T(N, std::vector<std::uint64_t>(N, 0));
        for (int i = 0; i < N; ++i)
            for (int l = 0; l < N; ++l)
                for (int j = 0; j < N; ++j) T[i][j] += P[i][l] * A[l][j];
        P = std::move(T);
    }
    std::uint64_t total = 0;
    for (int m = 0; m < N; ++m) {
        std::uint64_t in = 0, out = 0;
        for (int s = 0; s < N; ++s) in += P[s][m];
        for (int t = 0; t < N; ++t) out += P[m][t];
        total += in * out;
    }
    return total;
}

} // namespace

CaptivityBoxReport captivity_check_boxes(const IfsSystem &ifs, const RoofFunction &roof,
                                         int depth_a, std::uint64_t cell_budget) {
    if (depth_a < 1) throw ConfigError("captivity_check_boxes: depth a >= 1 required");
    CaptivityBoxReport rep;
    rep.depth_a = depth_a;
    rep.cell_count = count_cells(ifs, depth_a);
    if (rep.cell_count > cell_budget)
        throw BudgetError("captivity_check_boxes: cell count " + std::to_string(rep.cell_count) +
                          " exceeds budget " + std::to_string(cell_budget));

    const double kappa = default_kappa(ifs);
    const double R = escape_radius(ifs, roof, kappa);
    rep.escape_radius = R;
    FutureWalker walker{ifs, roof, depth_a, R, zeta_slope_bound(ifs, roof),
                       roof.max_abs(ifs), ifs.theta()};

    const int N = ifs.size();
    int max_off = 0;
    bool any_off = false;

    // Walk every past cylinder (source s, maps u_1..u_a).
    std::vector<int> past;
    std::function<void(int, Interval)> walk_past = [&](int prev, Interval iv) {
        if (static_cast<int>(past.size()) == depth_a) {
            const int m = prev; // cylinder lands in I_m
            walker.cells(m, iv, [&](const std::vector<int> &future, const Interval &cell_xi) {
                const int coded = future[0];
                for (int j = 0; j < N; ++j) {
                    if (j == coded || !ifs.admissible(m, j)) continue;
                    const BranchMap &b = ifs.branch(m, j);
                    const Interval img_x = b.is_mobius() ? b.mobius->map_interval(iv)
                                                         : Interval::hull_of(b(iv.lo), b(iv.hi));
                    // xi' = xi/phi'(x) + tau'(x'): interval arithmetic over the box
                    const double inv0 = 1.0 / b.deriv(iv.lo), inv1 = 1.0 / b.deriv(iv.hi);
                    const double p00 = cell_xi.lo * inv0, p01 = cell_xi.lo * inv1;
                    const double p10 = cell_xi.hi * inv0, p11 = cell_xi.hi * inv1;
                    const double t0 = roof.at(b, iv.lo), t1 = roof.at(b, iv.mid()),
                                 t2 = roof.at(b, iv.hi);
                    const double tlo = std::min({t0, t1, t2}), thi = std::max({t0, t1, t2});
                    Interval img_xi(std::min({p00, p01, p10, p11}) + tlo - 1e-12,
                                    std::max({p00, p01, p10, p11}) + thi + 1e-12);
                    const int met = walker.count_meets(j, img_x, img_xi, 2);
                    if (met > 0) {
                        any_off = true;
                        max_off = std::max(max_off, met);
                    }
                }
            });
            return;
        }
        for (int t = 0; t < N; ++t) {
            if (!ifs.admissible(prev, t)) continue;
            const BranchMap &b = ifs.branch(prev, t);
            past.push_back(t);
            walk_past(t, b.is_mobius() ? b.mobius->map_interval(iv)
                                       : Interval::hull_of(b(iv.lo), b(iv.hi)));
            past.pop_back();
        }
    };
    for (int s = 0; s < N; ++s) walk_past(s, ifs.interval(s));

    rep.max_multiplicity = 1 + max_off;
    if (!any_off) {
        rep.verdict = CaptivityVerdict::Captive;
        return rep;
    }

    // Box-level overlap: hunt for a pointwise witness among trapped periodic
    // points.  A point with two branch images inside exact cell tubes proves
    // the violation.
    for (int period = 1; period <= std::min(2 * depth_a, 10); ++period) {
        if (count_words(ifs, period, WordKind::Cyclic) > 200000ULL) break;
        for (const TrappedPoint &tp : trapped_set_points(ifs, roof, period)) {
            const int i0 = tp.word.symbols.back();
            int hits = 0;
            for (int j = 0; j < N; ++j) {
                if (!ifs.admissible(i0, j)) continue;
                const PhasePoint q = canonical_apply(ifs, roof, i0, j, tp.p);
                if (walker.point_in_cell(j, q.x, q.xi, 1e-12)) ++hits;
            }
            if (hits >= 2) {
                rep.verdict = CaptivityVerdict::Violated;
                rep.witness = tp.p;
                rep.note = "witness orbit " + tp.word.to_string();
                rep.max_multiplicity = std::max(rep.max_multiplicity, hits);
                return rep;
            }
        }
    }

    rep.verdict = CaptivityVerdict::Inconclusive;
    rep.note = "box overlap without pointwise witness; retry with larger depth";
    return rep;
}

CaptivityBoxReport captivity_search(const IfsSystem &ifs, const RoofFunction &roof, int max_a,
                                    std::uint64_t cell_budget) {
    CaptivityBoxReport last;
    for (int a = 1; a <= max_a; ++a) {
        last = captivity_check_boxes(ifs, roof, a, cell_budget);
        if (last.verdict != CaptivityVerdict::Inconclusive) return last;
    }
    return last;
}

std::vector<PhaseCell> phase_cells(const IfsSystem &ifs, const RoofFunction &roof, int depth_a,
                                   std::uint64_t cell_budget) {
    if (depth_a < 1) throw ConfigError("phase_cells: depth a >= 1 required");
    const std::uint64_t count = count_cells(ifs, depth_a);
    if (count > cell_budget)
        throw BudgetError("phase_cells: cell count " + std::to_string(count) + " exceeds budget");
    const double R = escape_radius(ifs, roof, default_kappa(ifs));
    FutureWalker walker{ifs,
                        roof,
                        depth_a,
                        R,
                        zeta_slope_bound(ifs, roof),
                        roof.max_abs(ifs),
                        ifs.theta()};
    std::vector<PhaseCell> out;
    const int N = ifs.size();
    std::vector<int> past; // source symbol followed by branch targets
    std::function<void(int, Interval)> walk_past = [&](int prev, Interval iv) {
        if (static_cast<int>(past.size()) == depth_a + 1) {
            walker.cells(prev, iv, [&](const std::vector<int> &future, const Interval &cell_xi) {
                PhaseCell cell;
                cell.past = past;
                cell.future.assign(1, prev);
                cell.future.insert(cell.future.end(), future.begin(), future.end());
                cell.box.x = iv;
                cell.box.xi = cell_xi;
                out.push_back(std::move(cell));
            });
            return;
        }
        for (int t = 0; t < N; ++t) {
            if (!ifs.admissible(prev, t)) continue;
            const BranchMap &b = ifs.branch(prev, t);
            past.push_back(t);
            walk_past(t, b.is_mobius() ? b.mobius->map_interval(iv)
                                       : Interval::hull_of(b(iv.lo), b(iv.hi)));
            past.pop_back();
        }
    };
    for (int s = 0; s < N; ++s) {
        past.assign(1, s);
        walk_past(s, ifs.interval(s));
    }
    return out;
}

bool phase_cell_contains(const IfsSystem &ifs, const RoofFunction &roof, int depth_a,
                         const PhasePoint &p) {
    const double R = escape_radius(ifs, roof, default_kappa(ifs));
    FutureWalker walker{ifs,
                        roof,
                        depth_a,
                        R,
                        zeta_slope_bound(ifs, roof),
                        roof.max_abs(ifs),
                        ifs.theta()};
    const int i = ifs.interval_of(p.x, 1e-12);
    if (i < 0) return false;
    return walker.point_in_cell(i, p.x, p.xi, 1e-12);
}

std::vector<ExtendedInterval> default_basin(const IfsSystem &ifs) {
    if (ifs.kind() == "gauss") return {ExtendedInterval::ray_below(-1.0)};
    std::vector<ExtendedInterval> basin;
    for (const auto &iv : ifs.intervals()) basin.push_back(ExtendedInterval::finite(iv.lo, iv.hi));
    return basin;
}

MobiusBasinReport captivity_check_mobius(const IfsSystem &ifs,
                                         const std::vector<ExtendedInterval> &basin) {
    const int N = ifs.size();
    MobiusBasinReport rep;
    rep.preimages.resize(N);

    // The check needs one Mobius map per branch target, independent of the
    // source (the eta dynamics decouples only then).
    std::vector<MobiusMap> g(N);
    for (int j = 0; j < N; ++j) {
        bool found = false;
        for (int i = 0; i < N; ++i) {
            if (!ifs.admissible(i, j)) continue;
            const BranchMap &b = ifs.branch(i, j);
            if (!b.is_mobius())
                throw ConfigError("captivity_check_mobius: non-Mobius system rejected");
            if (!found) {
                g[j] = *b.mobius;
                found = true;
            } else {
                const MobiusMap &m = *b.mobius;
                if (std::abs(m.a - g[j].a) + std::abs(m.b - g[j].b) + std::abs(m.c - g[j].c) +
                        std::abs(m.d - g[j].d) >
                    1e-12)
                    throw ConfigError(
                        "captivity_check_mobius: branch maps must not depend on the source");
            }
        }
        if (!found) throw ConfigError("captivity_check_mobius: target without branches");
    }

    for (int j = 0; j < N; ++j) {
        const MobiusMap h = g[j].inverse();
        for (std::size_t c = 0; c < basin.size(); ++c) {
            const ExtendedInterval &comp = basin[c];
            // pole of h inside the component -> image is an arc through
            // infinity; excluded (branch-image computation ignores it).
            const double pole = h.pole();
            bool contains_pole;
            if (comp.lo_infinite && comp.hi_infinite) {
                contains_pole = true;
            } else if (comp.lo_infinite) {
                contains_pole = pole < comp.hi;
            } else if (comp.hi_infinite) {
                contains_pole = pole > comp.lo;
            } else {
                contains_pole = pole > comp.lo && pole < comp.hi;
            }
            if (h.c != 0.0 && contains_pole) {
                rep.dropped.emplace_back(j, static_cast<int>(c));
                continue;
            }
            const double e1 = comp.lo_infinite ? h.at_infinity() : h(comp.lo);
            const double e2 = comp.hi_infinite ? h.at_infinity() : h(comp.hi);
            rep.preimages[j].push_back(Interval::hull_of(e1, e2));
        }
    }

    rep.captive = true;
    for (int j = 0; j < N && rep.captive; ++j)
        for (int k = j + 1; k < N && rep.captive; ++k)
            for (const auto &u : rep.preimages[j])
                for (const auto &v : rep.preimages[k])
                    if (u.overlaps_interior(v, 1e-12)) {
                        rep.captive = false;
                        rep.note = "preimages of branches " + std::to_string(j + 1) + " and " +
                                   std::to_string(k + 1) + " overlap";
                        break;
                    }
    return rep;
}

} // namespace ruelle
