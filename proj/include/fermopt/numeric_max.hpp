#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "fermopt/fermion_core.hpp"
#include "fermopt/gaussian.hpp"

namespace fermopt {

/// dE/dGamma_ab for a < b (stored antisymmetrically) of E = sum_I J_I Pf(Gamma_I),
/// from the minor expansion dPf/da_ij = (-1)^{i+j+1} Pf(minor_ij).
Eigen::MatrixXd energy_gradient(const Eigen::MatrixXd& gamma, const MajoranaHamiltonian& h);

/// Sum_I J_I Pf(Gamma_I) without validation; closed forms for weights 2, 4.
double energy(const Eigen::MatrixXd& gamma, const MajoranaHamiltonian& h);

struct NumericMaxOptions {
  int restarts = 8;
  int max_iters = 400;
  double grad_tol = 1e-9;
  std::uint64_t seed = 0;
  // Extra starting points, e.g. matching states from a pipeline.
  std::vector<CorrelationMatrix> seeds;
};

struct NumericMaxResult {
  CorrelationMatrix gamma;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Riemannian ascent over pure Gaussian states Gamma = R Gamma_0 R^T with
/// Cayley retraction along X = [Gamma, G]. Restarts alternate between the two
/// parity components. Returns the best value found (a lower bound on the
/// Gaussian maximum).
NumericMaxResult gaussian_numeric_max(const MajoranaHamiltonian& h, const NumericMaxOptions& options = {});

/// Exact Gaussian maximum of a purely quadratic H: the sum of the positive
/// normal-form values, i.e. half the singular values of the coefficient matrix.
double quadratic_gaussian_max(const MajoranaHamiltonian& h);

}  // namespace fermopt
