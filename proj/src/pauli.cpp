#include "fermopt/pauli.hpp"

#include <bit>

namespace fermopt {

PauliString majorana_pauli(ModeIndex i) {
  const int j = i / 2;
  const std::uint32_t below = (std::uint32_t{1} << j) - 1;
  if (i % 2 == 0) return {std::uint32_t{1} << j, below, 0};
  return {std::uint32_t{1} << j, below | (std::uint32_t{1} << j), 1};
}

PauliString multiply(const PauliString& a, const PauliString& b) {
  const int swaps = std::popcount(a.z & b.x);
  return {a.x ^ b.x, a.z ^ b.z, (a.phase + b.phase + 2 * swaps) & 3};
}

PauliString monomial_pauli(std::span<const ModeIndex> indices) {
  PauliString p{0, 0, static_cast<int>(indices.size() / 2) & 3};
  for (ModeIndex i : indices) p = multiply(p, majorana_pauli(i));
  return p;
}

std::complex<double> phase_factor(int phase) {
  switch (phase & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

void PauliSum::add(const PauliString& p, std::complex<double> coeff) {
  terms_.push_back({p.x, p.z, coeff * phase_factor(p.phase)});
}

void PauliSum::apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
  const auto d = static_cast<std::uint32_t>(dim());
  out.setZero(in.size());
  for (const auto& t : terms_) {
    for (std::uint32_t s = 0; s < d; ++s) {
      const std::complex<double> v = (std::popcount(t.z & s) & 1) ? -in[s] : in[s];
      out[s ^ t.x] += t.coeff * v;
    }
  }
}

Eigen::MatrixXcd PauliSum::dense() const {
  const auto d = static_cast<std::uint32_t>(dim());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& t : terms_) {
    for (std::uint32_t s = 0; s < d; ++s) {
      m(s ^ t.x, s) += (std::popcount(t.z & s) & 1) ? -t.coeff : t.coeff;
    }
  }
  return m;
}

PauliSum to_pauli(const MajoranaHamiltonian& h) {
  if (h.n_modes() > 31) throw Error(ErrorCode::kBudgetExceeded, "budget exceeded: more than 31 modes");
  PauliSum sum(h.n_modes());
  for (const auto& t : h.terms()) sum.add(monomial_pauli(t.indices), t.coeff);
  return sum;
}

}  // namespace fermopt
