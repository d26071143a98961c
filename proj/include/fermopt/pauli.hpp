#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fermopt/fermion_core.hpp"

namespace fermopt {

/// i^phase X^x Z^z on qubits indexed by bit position.
struct PauliString {
  std::uint32_t x = 0;
  std::uint32_t z = 0;
  int phase = 0;  // mod 4
};

/// Jordan-Wigner image: c_{2j} = Z..Z X_j, c_{2j+1} = Z..Z Y_j.
PauliString majorana_pauli(ModeIndex i);

PauliString multiply(const PauliString& a, const PauliString& b);

/// i^{q/2} c_{i1} ... c_{iq}.
PauliString monomial_pauli(std::span<const ModeIndex> indices);

std::complex<double> phase_factor(int phase);

/// Weighted sum of Pauli strings acting on 2^n_modes amplitudes.
class PauliSum {
 public:
  struct Term {
    std::uint32_t x;
    std::uint32_t z;
    std::complex<double> coeff;
  };

  PauliSum() = default;
  explicit PauliSum(int n_modes) : n_modes_(n_modes) {}

  int n_modes() const { return n_modes_; }
  std::size_t dim() const { return std::size_t{1} << n_modes_; }
  const std::vector<Term>& terms() const { return terms_; }

  void add(const PauliString& p, std::complex<double> coeff);

  /// out = sum_t coeff_t P_t in.
  void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;

  Eigen::MatrixXcd dense() const;

 private:
  int n_modes_ = 0;
  std::vector<Term> terms_;
};

/// Pauli form of H; n_modes up to 31.
PauliSum to_pauli(const MajoranaHamiltonian& h);

}  // namespace fermopt
