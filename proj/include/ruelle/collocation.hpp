#pragma once

#include <vector>

#include "ruelle/ifs.hpp"

namespace ruelle {

// Per-interval Chebyshev-Lagrange collocation data.
//
// Nodes are first-kind Chebyshev points mapped affinely into each interval
// (strictly interior), with barycentric weights for stable interpolation and
// Fejer quadrature weights for inner products.
class CollocationGrid {
  public:
    CollocationGrid(const IfsSystem &ifs, int nodes_per_interval);

    int nodes_per_interval() const { return M_; }
    int total_nodes() const { return M_ * n_intervals_; }
    int n_intervals() const { return n_intervals_; }

    double node(int interval, int k) const { return nodes_[interval][k]; }
    int flat_index(int interval, int k) const { return interval * M_ + k; }

    // Barycentric Lagrange basis values l_{interval,l}(x) for all l; x must
    // lie inside the interval.
    void basis_row(int interval, double x, std::vector<double> &out) const;

    // Quadrature weight of node (interval, k) for integrals over the interval.
    double quad_weight(int interval, int k) const { return quad_[interval][k]; }

  private:
    int M_;
    int n_intervals_;
    std::vector<double> ref_nodes_;   // reference nodes on (-1,1), decreasing
    std::vector<double> ref_weights_; // barycentric weights
    std::vector<double> ref_quad_;    // Fejer-1 weights on (-1,1)
    std::vector<std::vector<double>> nodes_;
    std::vector<std::vector<double>> quad_;
    std::vector<double> mid_, half_;
};

} // namespace ruelle
