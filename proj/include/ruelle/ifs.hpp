#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ruelle/errors.hpp"
#include "ruelle/interval.hpp"
#include "ruelle/mobius.hpp"

namespace ruelle {

// One contracting branch phi_{i,j} : I_i -> Int(I_j).
//
// All built-in systems are Mobius-backed; the callable pair is an extension
// point for general smooth branches and stays unset for the built-ins.
struct BranchMap {
    int source = -1;
    int target = -1;
    std::optional<MobiusMap> mobius;
    std::function<double(double)> value_fn;
    std::function<double(double)> deriv_fn;

    bool is_mobius() const { return mobius.has_value(); }

    double operator()(double x) const {
        return mobius ? (*mobius)(x) : value_fn(x);
    }
    double deriv(double x) const {
        return mobius ? mobius->deriv(x) : deriv_fn(x);
    }

    static BranchMap from_mobius(int i, int j, const MobiusMap &m) {
        BranchMap b;
        b.source = i;
        b.target = j;
        b.mobius = m;
        return b;
    }
};

// Iterated function scheme: disjoint closed intervals I_1..I_N, a 0/1
// adjacency matrix, one strict contraction per admissible transition, and a
// contraction bound sup |phi'| <= theta < 1.
class IfsSystem {
  public:
    IfsSystem(std::vector<Interval> intervals,
              std::vector<std::vector<int>> adjacency,
              std::vector<BranchMap> branches,
              double theta,
              std::string kind = "custom");

    int size() const { return static_cast<int>(intervals_.size()); }
    const std::vector<Interval> &intervals() const { return intervals_; }
    const Interval &interval(int i) const { return intervals_.at(i); }
    const std::vector<std::vector<int>> &adjacency() const { return adjacency_; }
    bool admissible(int i, int j) const { return adjacency_[i][j] != 0; }

    const BranchMap &branch(int i, int j) const;
    bool all_mobius() const { return all_mobius_; }
    double theta() const { return theta_; }
    void set_theta(double t) { theta_ = t; }

    // Index of the interval containing x, or -1.
    int interval_of(double x, double tol = 0.0) const;

    // "gauss", "schottky" or "custom"; used by config round trips.
    const std::string &kind() const { return kind_; }
    // Builder metadata: number of Gauss branches / Schottky generators.
    int meta_n() const { return meta_n_; }
    void set_meta_n(int n) { meta_n_ = n; }
    // Schottky generators (the r group generators, not the 2r branch maps).
    const std::vector<MobiusMap> &generators() const { return generators_; }
    void set_generators(std::vector<MobiusMap> g) { generators_ = std::move(g); }

    bool adjacency_symmetric() const;

  private:
    std::vector<Interval> intervals_;
    std::vector<std::vector<int>> adjacency_;
    std::vector<std::optional<BranchMap>> branches_; // dense i*N+j
    double theta_;
    bool all_mobius_ = true;
    std::string kind_;
    int meta_n_ = 0;
    std::vector<MobiusMap> generators_;
};

// The paper's two worked constructions.
IfsSystem build_gauss_ifs(int n_branches);
IfsSystem build_schottky_ifs(const std::vector<MobiusMap> &generators,
                             const std::vector<Interval> &half_disc_intervals);
// The Schottky example with the figure's generator matrices.
IfsSystem build_schottky_example();

// Result of checking the defining conditions on a constructed system.
struct VerifyReport {
    bool pass = false;
    bool intervals_disjoint = false;
    bool images_inside = false;
    bool images_disjoint = false;
    double sup_abs_deriv = 0.0; // empirical sup |phi'| over all branches
    double theta = 0.0;         // sup_abs_deriv with safety margin
    std::string first_violation;
    double witness = 0.0; // point witnessing the first violation, if any
};

VerifyReport verify_ifs(const IfsSystem &ifs, int samples_per_interval);

} // namespace ruelle
