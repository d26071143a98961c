#pragma once

#include <Eigen/Dense>

namespace fermopt {

// Absolute antisymmetry tolerance applied to every matrix entering a
// Pfaffian or a correlation matrix.
inline constexpr double kAntisymmetryTol = 1e-12;

/// Pfaffian of a real antisymmetric matrix via Parlett-Reid
/// tridiagonalization with partial pivoting, O(m^3).
///
/// The input is symmetrized as (A - A^T)/2 before use. Throws
/// kInvalidArgument for odd dimension or when max|A + A^T| exceeds
/// kAntisymmetryTol. The 0x0 Pfaffian is 1.
double pfaffian(const Eigen::MatrixXd& a);

/// Same as pfaffian() but skips validation; `a` is consumed as workspace.
double pfaffian_unchecked(Eigen::MatrixXd& a);

}  // namespace fermopt
