#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ruelle/ifs.hpp"
#include "ruelle/word.hpp"

namespace ruelle {

// All adjacency-respecting words of the given length, lexicographic order.
// Cyclic words additionally satisfy A[last][first] = 1.
std::vector<Word> admissible_words(const IfsSystem &ifs, int length, WordKind kind);

// Exact path counts: number of admissible words of `length` symbols
// (cyclic: trace of A^length).
std::uint64_t count_words(const IfsSystem &ifs, int length, WordKind kind);

// Composition of the branches named by a word, applied first-symbol first.
// The source interval is `source` (must satisfy A[source][w_0] = 1); pass
// source = w_{n-1} for cyclic words.
struct ComposedBranch {
    int source = -1;
    int target = -1;
    std::vector<int> symbols;
    bool is_mobius = false;
    MobiusMap mobius; // valid when is_mobius

    double operator()(double x) const;
    double deriv(double x) const; // chain rule

    const IfsSystem *ifs = nullptr; // generic path evaluates through the system
};

ComposedBranch compose_branch(const IfsSystem &ifs, const Word &word, int source);
// Cyclic convenience: source = last symbol.
ComposedBranch compose_branch(const IfsSystem &ifs, const Word &word);

// Banach fixed point of the composed contraction of a cyclic word, found by
// iteration from the source-interval midpoint.
struct PeriodicPoint {
    double x = 0.0;
    double residual = 0.0;    // |phi_w(x) - x|
    double error_bound = 0.0; // residual / (1 - theta^n)
    double multiplier = 0.0;  // signed phi_w'(x)
};

PeriodicPoint periodic_point(const IfsSystem &ifs, const Word &word);

// Cylinder intervals I_{w_{-n,0}} at the given depth (depth 0: the base
// intervals).  Deterministic lexicographic order over (source, word).
std::vector<Interval> trapped_set_cover(const IfsSystem &ifs, int depth);

// Coded point of a past word at truncation n: midpoint of the depth-n
// cylinder, with the half-length as guaranteed error bound.
struct CodedPoint {
    double x = 0.0;
    double error_bound = 0.0;
    Interval cylinder{0.0, 1.0};
};

CodedPoint coding_point(const IfsSystem &ifs, const Word &past_word, int truncation);

// Streaming enumeration of cyclic words with periodic-orbit data.
//
// Visits every admissible cyclic word of length n in lexicographic order and
// calls f(symbols, data) with the fixed point of the word's composition.
// Enumeration cost is counted against `budget_leaves` (throws BudgetError
// before starting if the exact path count exceeds it).
struct OrbitData {
    double x = 0.0;          // periodic point, in I_{symbols.back()}
    double multiplier = 0.0; // signed phi_w'(x), |multiplier| < 1
    double residual = 0.0;
};

using OrbitVisitor = std::function<void(const std::vector<int> &, const OrbitData &)>;

void for_each_cyclic_word(const IfsSystem &ifs, int n, const OrbitVisitor &f,
                          std::uint64_t budget_leaves = 400000000ULL);

// Same enumeration restricted to words starting with `first_symbol`; used to
// partition orbit reductions deterministically (serial and parallel sums fold
// the per-symbol subtotals in the same order).
void for_each_cyclic_word_from(const IfsSystem &ifs, int n, int first_symbol,
                               const OrbitVisitor &f);

// Orbit points x_0 = x*, x_k = phi_{w_k}(x_{k-1}) around a cyclic word.
std::vector<double> orbit_points(const IfsSystem &ifs, const std::vector<int> &symbols,
                                 double fixed_point);

} // namespace ruelle
