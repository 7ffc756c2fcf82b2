#include "ruelle/zeta.hpp"

#include <algorithm>
#include <cmath>

#include "ruelle/symbolic.hpp"

namespace ruelle {

std::vector<PrimitiveOrbit> enumerate_primitive_orbits(const IfsSystem &ifs, int max_period,
                                                       std::uint64_t orbit_budget) {
    if (max_period < 1) throw ConfigError("enumerate_primitive_orbits: max_period >= 1");
    // Lyndon-word budget: bounded by total cyclic words.
    std::uint64_t total = 0;
    for (int n = 1; n <= max_period; ++n) total += count_words(ifs, n, WordKind::Cyclic);
    if (total > orbit_budget)
        throw BudgetError("enumerate_primitive_orbits: cyclic-word total " +
                          std::to_string(total) + " exceeds budget");

    const int K = ifs.size();
    std::vector<PrimitiveOrbit> out;

    // Duval's generation of all Lyndon words of length <= max_period over
    // {0..K-1}, filtered by cyclic adjacency-admissibility.  Lyndon words are
    // exactly one representative per primitive necklace.
    std::vector<int> w{-1};
    while (!w.empty()) {
        ++w.back();
        const int d = static_cast<int>(w.size());
        bool ok = true;
        for (int i = 0; ok && i + 1 < d; ++i) ok = ifs.admissible(w[i], w[i + 1]);
        if (ok) ok = ifs.admissible(w[d - 1], w[0]);
        if (ok) {
            Word word(w, WordKind::Cyclic);
            PeriodicPoint p = periodic_point(ifs, word);
            PrimitiveOrbit orb;
            orb.lyndon_word = word;
            orb.multiplier = std::abs(p.multiplier);
            orb.mult_sign = p.multiplier < 0.0 ? -1 : 1;
            orb.length_gamma = -std::log(orb.multiplier);
            orb.fixed_point = p.x;
            out.push_back(std::move(orb));
        }
        const int m = static_cast<int>(w.size());
        while (static_cast<int>(w.size()) < max_period) w.push_back(w[w.size() - m]);
        while (!w.empty() && w.back() == K - 1) w.pop_back();
    }
    return out;
}

ZetaProduct selberg_zeta_product(const IfsSystem &ifs, Complex s, int max_period, int m_max,
                                 std::uint64_t orbit_budget) {
    std::vector<PrimitiveOrbit> orbits = enumerate_primitive_orbits(ifs, max_period, orbit_budget);
    ZetaProduct zp;
    zp.max_period = max_period;
    zp.certified = s.real() > 1.0;
    if (orbits.empty()) return zp;

    double lmin = orbits.front().length_gamma;
    for (const auto &o : orbits) lmin = std::min(lmin, o.length_gamma);
    if (m_max < 0) {
        // smallest m with e^{-(Re s + m) lmin} < 1e-12
        const double target = -std::log(1e-12);
        m_max = std::max(0, static_cast<int>(std::ceil(target / lmin - s.real())) + 1);
        m_max = std::min(m_max, 4000);
    }
    zp.m_max = m_max;

    Complex log_total = 0.0;
    for (const auto &o : orbits) {
        for (int m = 0; m <= m_max; ++m) {
            const double sign = (m % 2 == 1 && o.mult_sign < 0) ? -1.0 : 1.0;
            const Complex factor = 1.0 - sign * std::exp(-(s + static_cast<double>(m)) * o.length_gamma);
            log_total += std::log(factor);
        }
        const double band = std::exp(-s.real() * o.length_gamma);
        if (o.lyndon_word.length() == max_period)
            zp.last_period_band = std::max(zp.last_period_band, band);
        zp.last_m_band =
            std::max(zp.last_m_band, std::exp(-(s.real() + m_max) * o.length_gamma));
    }
    zp.value = std::exp(log_total);
    return zp;
}

DeterminantValue zeta_via_determinant(const IfsSystem &ifs, Complex s, int n_max,
                                      std::uint64_t orbit_budget) {
    if (n_max < 6) throw ConfigError("zeta_via_determinant: n_max >= 6 required");
    SpectralParams p = SpectralParams::gkw(s.real(), s.imag());
    return dynamical_determinant(ifs, p, Complex(1.0, 0.0), n_max, orbit_budget);
}

ResonanceCondition resonance_condition(const IfsSystem &ifs, Complex s, int M, double tolerance) {
    ResonanceSet rs = compute_resonances(ifs, SpectralParams::gkw(s.real(), s.imag()), M);
    ResonanceCondition rc;
    rc.M = M;
    rc.gap = 1e300;
    for (std::size_t i = 0; i < rs.eigenvalues.size(); ++i)
        if (rs.stable[i]) rc.gap = std::min(rc.gap, std::abs(1.0 - rs.eigenvalues[i]));
    rc.verdict = rc.gap < tolerance;
    return rc;
}

ZeroSearchResult zero_search(const IfsSystem &ifs, Complex rect_lo, Complex rect_hi,
                             int grid_density, int refine_iters, int max_matrix_dim) {
    if (grid_density < 4) throw ConfigError("zero_search: grid density >= 4 required");
    const double bmax = std::max(std::abs(rect_lo.imag()), std::abs(rect_hi.imag()));
    const int M = nodes_for_b(ifs, bmax);
    if (M * ifs.size() > max_matrix_dim)
        throw BudgetError("zero_search: matrix dimension " + std::to_string(M * ifs.size()) +
                          " exceeds budget " + std::to_string(max_matrix_dim));
    ZeroSearchResult res;
    res.M = M;
    res.grid_re = grid_density;
    res.grid_im = grid_density;

    CollocationGrid grid(ifs, M);
    auto d_eval = [&](Complex s) {
        TransferMatrix tm = build_matrix(ifs, SpectralParams::gkw(s.real(), s.imag()), grid);
        return matrix_determinant(tm, Complex(1.0, 0.0));
    };

    const double dre = (rect_hi.real() - rect_lo.real()) / (grid_density - 1);
    const double dim_step = (rect_hi.imag() - rect_lo.imag()) / (grid_density - 1);
    std::vector<std::vector<double>> mag(grid_density, std::vector<double>(grid_density));
    for (int p = 0; p < grid_density; ++p)
        for (int q = 0; q < grid_density; ++q)
            mag[p][q] = std::abs(
                d_eval(Complex(rect_lo.real() + p * dre, rect_lo.imag() + q * dim_step)));

    const double spacing = std::hypot(dre, dim_step);
    struct Candidate {
        Complex s;
        double mag;
    };
    std::vector<Candidate> candidates;
    for (int p = 0; p < grid_density; ++p)
        for (int q = 0; q < grid_density; ++q) {
            bool is_min = true;
            for (int dp = -1; dp <= 1 && is_min; ++dp)
                for (int dq = -1; dq <= 1; ++dq) {
                    if (dp == 0 && dq == 0) continue;
                    const int pp = p + dp, qq = q + dq;
                    if (pp < 0 || qq < 0 || pp >= grid_density || qq >= grid_density) continue;
                    if (mag[pp][qq] < mag[p][q]) {
                        is_min = false;
                        break;
                    }
                }
            if (is_min)
                candidates.push_back(
                    {Complex(rect_lo.real() + p * dre, rect_lo.imag() + q * dim_step), mag[p][q]});
        }

    for (const Candidate &c : candidates) {
        // complex secant refinement
        Complex s0 = c.s, s1 = c.s + Complex(0.25 * dre, 0.25 * dim_step);
        Complex f0 = d_eval(s0), f1 = d_eval(s1);
        bool converged = false;
        for (int it = 0; it < refine_iters; ++it) {
            if (f1 == f0) break;
            const Complex s2 = s1 - f1 * (s1 - s0) / (f1 - f0);
            s0 = s1;
            f0 = f1;
            s1 = s2;
            f1 = d_eval(s1);
            if (std::abs(s1 - s0) < 1e-10 || std::abs(f1) < 1e-12) {
                converged = true;
                break;
            }
        }
        const bool inside = s1.real() > rect_lo.real() - dre && s1.real() < rect_hi.real() + dre &&
                            s1.imag() > rect_lo.imag() - dim_step &&
                            s1.imag() < rect_hi.imag() + dim_step;
        if (converged && inside && std::abs(f1) < 1e-8) {
            bool dup = false;
            for (const Complex &z : res.zeros)
                if (std::abs(z - s1) < spacing) dup = true;
            if (!dup && resonance_condition(ifs, s1).verdict) res.zeros.push_back(s1);
        } else if (!converged && c.mag < 1e-3) {
            res.unresolved.push_back(c.s);
        }
    }
    std::sort(res.zeros.begin(), res.zeros.end(), [](const Complex &u, const Complex &v) {
        return u.real() != v.real() ? u.real() < v.real() : u.imag() < v.imag();
    });
    return res;
}

} // namespace ruelle
