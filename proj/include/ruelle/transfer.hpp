#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "ruelle/collocation.hpp"
#include "ruelle/ifs.hpp"

namespace ruelle {

using Complex = std::complex<double>;

// Spectral parameters s = a + i b of the weighted transfer operator.
//
// gkw mode discretizes the composition (adjoint) side with the combined
// weight |phi'(y)|^s; the general mode takes explicit potential V and roof
// tau and uses the weight |phi'(y)| e^{V(phi(y))} e^{-i b tau(phi(y))}.
// Both act on functions over the base intervals; the spectrum of the general
// matrix at (V, tau, b) is the complex conjugate of the gkw matrix at s, the
// usual adjoint bookkeeping.
struct SpectralParams {
    enum class Mode { Gkw, General };
    double a = 1.0;
    double b = 0.0;
    Mode mode = Mode::Gkw;
    std::function<Complex(double)> V;  // general mode only
    std::function<double(double)> tau; // general mode only

    Complex s() const { return {a, b}; }

    static SpectralParams gkw(double a, double b = 0.0) {
        SpectralParams p;
        p.a = a;
        p.b = b;
        return p;
    }
    static SpectralParams general(std::function<Complex(double)> V,
                                  std::function<double(double)> tau, double b) {
        SpectralParams p;
        p.mode = Mode::General;
        p.V = std::move(V);
        p.tau = std::move(tau);
        p.b = b;
        return p;
    }
};

struct TransferMatrix {
    Eigen::MatrixXcd mat;
    SpectralParams params;
    int nodes_per_interval = 0;
};

// Collocation of psi -> sum_j weight_{i,j} psi o g_j.  Entry [(i,k),(j,l)] is
// weight_{i,j}(y_{i,k}) * l_{j,l}(g_j(y_{i,k})); blocks of forbidden
// transitions stay exactly zero.
TransferMatrix build_matrix(const IfsSystem &ifs, const SpectralParams &params,
                            const CollocationGrid &grid);

TransferMatrix build_matrix(const IfsSystem &ifs, const SpectralParams &params,
                            int nodes_per_interval);

// Ruelle resonances of the discretized operator with an M-refinement
// stability flag: an eigenvalue is stable when the refined discretization
// reproduces it within max(1e-8, 1e-6 |lambda|).
struct ResonanceSet {
    std::vector<Complex> eigenvalues; // sorted by modulus, descending
    std::vector<bool> stable;
    SpectralParams params;
    int M = 0;
    int refined_M = 0;

    int n_stable() const;
    double max_stable_modulus() const;
};

ResonanceSet resonances(const IfsSystem &ifs, const TransferMatrix &matrix, int refine_step);
ResonanceSet compute_resonances(const IfsSystem &ifs, const SpectralParams &params, int M,
                                int refine_step = 8);

// Node-count heuristic for oscillatory weights, M(b) = max(24, ceil(1.5 b max|I_i|)).
int nodes_for_b(const IfsSystem &ifs, double b);

// Flat trace of the n-th operator power: sum over cyclic words of length n of
// weight_w(x_w) / |1 - phi_w'(x_w)| with weight_w the orbit product of the
// branch weights (gkw: |phi_w'(x_w)|^s).
Complex flat_trace(const IfsSystem &ifs, const SpectralParams &params, int n,
                   std::uint64_t orbit_budget = 400000000ULL);

// d(z,s) = exp(-sum_{n>=1} z^n/n Tr^b(L_s^n)), truncated at n_max.
struct DeterminantValue {
    Complex value{1.0, 0.0};
    double last_term_magnitude = 0.0; // tail indicator
    bool diverging = false;           // terms growing at the truncation end
};

DeterminantValue dynamical_determinant(const IfsSystem &ifs, const SpectralParams &params,
                                       Complex z, int n_max,
                                       std::uint64_t orbit_budget = 400000000ULL);

// det(I - z M) of the collocation matrix (the discretized determinant).
Complex matrix_determinant(const TransferMatrix &matrix, Complex z);

} // namespace ruelle
