#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ruelle/phase.hpp"

namespace ruelle {

enum class CaptivityVerdict { Captive, Violated, Inconclusive };

const char *to_string(CaptivityVerdict v);

// Box certificate for minimal captivity at depth a.
//
// Cells are the phase-space cylinders: x in a depth-a past cylinder, xi in
// the exact tube of half-width |phi'_{v}| R around the truncated branch
// curve zeta_v of a depth-a future word.  Each admissible branch image of
// each cell is tested against the cell family:
//   * every cell meets the family through at most its coded branch -> captive;
//   * a trapped periodic point with two branch images inside cells -> violated;
//   * box-level overlap without a pointwise witness -> inconclusive.
struct CaptivityBoxReport {
    CaptivityVerdict verdict = CaptivityVerdict::Inconclusive;
    int depth_a = 0;
    std::uint64_t cell_count = 0;
    int max_multiplicity = 1; // box-level upper bound on #{F(x,xi) in K_{a,a}}
    std::optional<PhasePoint> witness;
    double escape_radius = 0.0;
    std::string note;
};

CaptivityBoxReport captivity_check_boxes(const IfsSystem &ifs, const RoofFunction &roof,
                                         int depth_a, std::uint64_t cell_budget = 8000000ULL);

// Searches depths 1..max_a and returns the first conclusive verdict.
CaptivityBoxReport captivity_search(const IfsSystem &ifs, const RoofFunction &roof, int max_a,
                                    std::uint64_t cell_budget = 8000000ULL);

// The cell family K_{a,a} as explicit boxes (x cylinder times xi enclosure).
struct PhaseCell {
    std::vector<int> past;   // source symbol + a branch targets
    std::vector<int> future; // base symbol + a branch targets
    PhaseBox box{{0.0, 1.0}, {0.0, 1.0}};
};

std::vector<PhaseCell> phase_cells(const IfsSystem &ifs, const RoofFunction &roof, int depth_a,
                                   std::uint64_t cell_budget = 8000000ULL);

// Exact pointwise membership of (x, xi) in some depth-a cell tube.
bool phase_cell_contains(const IfsSystem &ifs, const RoofFunction &roof, int depth_a,
                         const PhasePoint &p);

// Interval on the extended line (endpoints may be at infinity).
struct ExtendedInterval {
    double lo = 0.0, hi = 0.0;
    bool lo_infinite = false, hi_infinite = false;

    static ExtendedInterval finite(double lo, double hi) { return {lo, hi, false, false}; }
    static ExtendedInterval ray_below(double hi) { return {0.0, hi, true, false}; }
};

// Mobius-basin certificate: the eta-coordinate decoupling reduces captivity
// to pairwise disjointness of the branch preimages g_j^{-1}(B) of a basin B.
// A basin component containing the pole of g_j^{-1} maps to an arc through
// infinity; those components are excluded from the preimage (and recorded),
// matching the branch-image computation in the source construction.
struct MobiusBasinReport {
    bool captive = false;
    // per branch target j: finite preimage intervals
    std::vector<std::vector<Interval>> preimages;
    std::vector<std::pair<int, int>> dropped; // (branch target, basin component)
    std::string note;
};

MobiusBasinReport captivity_check_mobius(const IfsSystem &ifs,
                                         const std::vector<ExtendedInterval> &basin);

// The paper values: Gauss ]-inf, -1[, Schottky the base intervals.
std::vector<ExtendedInterval> default_basin(const IfsSystem &ifs);

} // namespace ruelle
