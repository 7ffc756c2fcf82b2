#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "ruelle/ifs.hpp"
#include "ruelle/transfer.hpp"
#include "ruelle/word.hpp"

namespace ruelle {

// One primitive periodic orbit (necklace class representative, not a power of
// a shorter word).  length_gamma = Birkhoff sum of J over the orbit
// = -log(multiplier); mult_sign carries the sign of phi_w'(x_w), which is
// (-1)^period for the Gauss branches and +1 for Schottky ones.
struct PrimitiveOrbit {
    Word lyndon_word;
    double length_gamma = 0.0;
    double multiplier = 0.0; // |phi_w'(x_w)| < 1
    int mult_sign = 1;
    double fixed_point = 0.0;
};

std::vector<PrimitiveOrbit> enumerate_primitive_orbits(const IfsSystem &ifs, int max_period,
                                                       std::uint64_t orbit_budget = 400000000ULL);

// Truncated Selberg zeta as the primitive-orbit double product
//   prod_gamma prod_{m=0..m_max} (1 - sign_gamma^m e^{-(s+m)|gamma|}).
// The sign factor reduces to the classical product when every branch
// derivative is positive (Schottky) and keeps the product equal to
// Det(1 - L_s) when branches reverse orientation (Gauss).
struct ZetaProduct {
    Complex value{1.0, 0.0};
    int max_period = 0;
    int m_max = 0;
    double last_period_band = 0.0; // max |e^{-s |gamma|}| over longest included orbits
    double last_m_band = 0.0;      // max |e^{-(s+m_max)|gamma|}|
    bool certified = false;        // Re s > 1 (absolute convergence)
};

ZetaProduct selberg_zeta_product(const IfsSystem &ifs, Complex s, int max_period,
                                 int m_max = -1, // -1: smallest m with band < 1e-12
                                 std::uint64_t orbit_budget = 400000000ULL);

// Same function through the dynamical determinant at z = 1 (orbit route).
DeterminantValue zeta_via_determinant(const IfsSystem &ifs, Complex s, int n_max,
                                      std::uint64_t orbit_budget = 400000000ULL);

// Distance of 1 to the stable spectrum of the collocation matrix at s.
struct ResonanceCondition {
    double gap = 0.0; // min over stable eigenvalues of |1 - lambda|
    bool verdict = false;
    int M = 0;
};

ResonanceCondition resonance_condition(const IfsSystem &ifs, Complex s, int M = 32,
                                       double tolerance = 1e-4);

// Zero search of Det(1 - L_s) over a rectangle in the s-plane: coarse grid of
// the collocation determinant, local minima refined by complex secant, each
// zero validated by resonance_condition.
struct ZeroSearchResult {
    std::vector<Complex> zeros;
    std::vector<Complex> unresolved; // candidates whose refinement failed
    int grid_re = 0, grid_im = 0;
    int M = 0;
};

ZeroSearchResult zero_search(const IfsSystem &ifs, Complex rect_lo, Complex rect_hi,
                             int grid_density, int refine_iters,
                             int max_matrix_dim = 2000);

} // namespace ruelle
