#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fermopt/ensembles.hpp"
#include "fermopt/fermion_core.hpp"
#include "fermopt/gaussian.hpp"

namespace fermopt {

using DenseOperator = Eigen::MatrixXcd;

// Largest n_modes for which dense 2^n x 2^n operators are built.
inline constexpr int kDenseModeBudget = 13;
// Largest n_modes for full dense diagonalization.
inline constexpr int kDenseEigenModes = 10;
// Largest n_modes for the matrix-free eigensolver.
inline constexpr int kIterativeModes = 16;

DenseOperator jordan_wigner(ModeIndex i, int n_modes);

/// Matrix of C_I = i^{|I|/2} c_{i1} ... c_{iq}.
DenseOperator monomial_matrix(std::span<const ModeIndex> indices, int n_modes);

DenseOperator dense_hamiltonian(const MajoranaHamiltonian& h);

enum class EigenMethod { kAuto, kDense, kIterative };

struct EigenOptions {
  double tol = 1e-10;
  int max_restarts = 200;
  int krylov_dim = 60;
  std::uint64_t seed = 1;
};

/// Dense path for n_modes <= kDenseEigenModes, Lanczos up to kIterativeModes.
double lambda_max_exact(const MajoranaHamiltonian& h, EigenMethod method = EigenMethod::kAuto,
                        const EigenOptions& options = {});

/// rho(M, lambda) = 2^-n prod (I + i lambda c_a c_b).
DenseOperator dense_state_from_matching(const MatchingState& state);

/// Dense Gaussian state with correlation matrix gamma, via its real Schur
/// normal form.
DenseOperator dense_state_from_correlation(const CorrelationMatrix& gamma);

/// Re Tr(H rho).
double dense_expectation(const DenseOperator& rho, const MajoranaHamiltonian& h);
double dense_expectation(const DenseOperator& rho, const DenseOperator& op);

/// Hermitian to 1e-10, trace 1, PSD and (optionally) idempotent.
bool is_valid_density(const DenseOperator& rho, bool pure, double tol = 1e-10);

struct ThetaCurve {
  std::vector<double> theta;
  std::vector<double> energy;       // Tr(H rho_theta)
  double slope = 0.0;               // Tr([zeta, H] rho_0), dense commutator
  double slope_closed_form = 0.0;   // -2 / (sqrt(n2) C) sum J^2
  double best_theta = 0.0;
  double best_energy = 0.0;
};

/// Sign of Tr([zeta, H] rho_0). tau_j is Hermitian, so tau_j^2 has a
/// positive diagonal and the sign is -1 for every even q >= 4.
double first_order_sign(int q);

/// Default grid: `points` log-spaced magnitudes in (1e-3, 2] carrying
/// first_order_sign(q), so the first-order term is positive.
std::vector<double> default_theta_grid(int q, int points = 64);

/// rho_theta = e^{-theta zeta} rho_0 e^{theta zeta} for the 2-colored model
/// with auxiliary sigma Majoranas after the chi block.
ThetaCurve rho_theta_sweep(const TwoColoredModel& model, std::span<const double> grid);

}  // namespace fermopt
