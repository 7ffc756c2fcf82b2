#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "ruelle/ifs.hpp"

namespace ruelle::detail {

// Inverse-iteration refinement of selected eigenvalues in quad precision.
//
// The collocation matrices are strongly non-normal: eigenvalue condition
// numbers grow geometrically down the spectrum, so both double-precision QR
// and double-rounded matrix entries lose the small eigenvalues.  The
// gkw-mode matrix for Mobius-backed systems is therefore re-assembled in
// __float128 and the double-precision eigenpairs are polished by two-sided
// Rayleigh-quotient iteration against it.  `order` lists eigenvalue indices
// (into `values` / eigenvector columns) to refine.
//
// Returns false when the system/mode has no quad assembly path (non-Mobius
// branches); callers keep the double results in that case.
bool refine_eigenvalues_quad(const IfsSystem &ifs, double a, double b, int M,
                             std::vector<std::complex<double>> &values,
                             const Eigen::MatrixXcd &vectors,
                             const std::vector<int> &order);

} // namespace ruelle::detail
