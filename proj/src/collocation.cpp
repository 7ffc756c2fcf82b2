#include "ruelle/collocation.hpp"

#include <cmath>

namespace ruelle {

CollocationGrid::CollocationGrid(const IfsSystem &ifs, int nodes_per_interval)
    : M_(nodes_per_interval), n_intervals_(ifs.size()) {
    if (M_ < 4) throw ConfigError("CollocationGrid: M >= 4 required");
    const double pi = std::acos(-1.0);
    ref_nodes_.resize(M_);
    ref_weights_.resize(M_);
    ref_quad_.resize(M_);
    for (int k = 0; k < M_; ++k) {
        const double theta = (2.0 * k + 1.0) * pi / (2.0 * M_);
        ref_nodes_[k] = std::cos(theta);
        // barycentric weights of first-kind Chebyshev points
        ref_weights_[k] = (k % 2 == 0 ? 1.0 : -1.0) * std::sin(theta);
        // Fejer's first quadrature rule
        double s = 0.0;
        for (int m = 1; m <= M_ / 2; ++m)
            s += std::cos(2.0 * m * theta) / (4.0 * m * m - 1.0);
        ref_quad_[k] = (2.0 / M_) * (1.0 - 2.0 * s);
    }

    nodes_.resize(n_intervals_);
    quad_.resize(n_intervals_);
    mid_.resize(n_intervals_);
    half_.resize(n_intervals_);
    for (int i = 0; i < n_intervals_; ++i) {
        const Interval &iv = ifs.interval(i);
        mid_[i] = iv.mid();
        half_[i] = 0.5 * iv.length();
        nodes_[i].resize(M_);
        quad_[i].resize(M_);
        for (int k = 0; k < M_; ++k) {
            nodes_[i][k] = mid_[i] + half_[i] * ref_nodes_[k];
            quad_[i][k] = half_[i] * ref_quad_[k];
        }
    }
}

void CollocationGrid::basis_row(int interval, double x, std::vector<double> &out) const {
    out.assign(M_, 0.0);
    const double t = (x - mid_[interval]) / half_[interval];
    // exact node hit
    for (int l = 0; l < M_; ++l) {
        if (t == ref_nodes_[l]) {
            out[l] = 1.0;
            return;
        }
    }
    double denom = 0.0;
    for (int l = 0; l < M_; ++l) {
        out[l] = ref_weights_[l] / (t - ref_nodes_[l]);
        denom += out[l];
    }
    for (int l = 0; l < M_; ++l) out[l] /= denom;
}

} // namespace ruelle
