#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fermopt/fermion_core.hpp"
#include "fermopt/pfaffian.hpp"

namespace fermopt {

using Dimer = std::pair<ModeIndex, ModeIndex>;

/// A perfect matching of [0, n_majoranas) into ordered pairs (a, b), a < b.
class Matching {
 public:
  Matching() = default;
  Matching(int n_majoranas, std::vector<Dimer> pairs);

  int n_majoranas() const { return static_cast<int>(partner_.size()); }
  const std::vector<Dimer>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  ModeIndex partner(ModeIndex i) const { return partner_[static_cast<std::size_t>(i)]; }
  int pair_of(ModeIndex i) const { return pair_of_[static_cast<std::size_t>(i)]; }

  friend bool operator==(const Matching& a, const Matching& b) { return a.pairs_ == b.pairs_; }

 private:
  std::vector<Dimer> pairs_;
  std::vector<ModeIndex> partner_;
  std::vector<int> pair_of_;
};

/// Pure Gaussian state rho(M, lambda) = 2^-n prod (1 + i lambda_p c_a c_b).
/// signs[p] is the dimer sign of matching.pairs()[p].
struct MatchingState {
  Matching matching;
  std::vector<int> signs;

  MatchingState() = default;
  MatchingState(Matching m, std::vector<int> s);
  /// All dimer signs +1.
  explicit MatchingState(Matching m);

  int n_majoranas() const { return matching.n_majoranas(); }
};

/// Real antisymmetric 2n x 2n correlation matrix Gamma_ij = (i/2) Tr(rho [c_i, c_j]).
///
/// Construction symmetrizes the input after checking antisymmetry to
/// kAntisymmetryTol and rejects singular values above 1 + 1e-9.
class CorrelationMatrix {
 public:
  CorrelationMatrix() = default;
  explicit CorrelationMatrix(Eigen::MatrixXd gamma);

  const Eigen::MatrixXd& gamma() const { return gamma_; }
  int n_majoranas() const { return static_cast<int>(gamma_.rows()); }
  int n_modes() const { return n_majoranas() / 2; }
  double operator()(ModeIndex i, ModeIndex j) const { return gamma_(i, j); }

  /// Gamma^T Gamma = I within `tol` (max-abs entrywise).
  bool is_pure(double tol = 1e-9) const;

 private:
  Eigen::MatrixXd gamma_;
};

struct ConsistencyVerdict {
  bool consistent = false;
  // Indices into Matching::pairs() covering the term, in order of first
  // appearance along the sorted term.
  std::vector<int> inner_pairs;
  // sign(pi) of the reordering that makes matched pairs adjacent.
  int sign = 0;
};

CorrelationMatrix correlation_from_matching(const MatchingState& state);

/// Recovers (M, lambda) when Gamma is a signed pairing matrix (each row has a
/// single entry of magnitude 1 within `tol`, all else ~0).
std::optional<MatchingState> matching_state_from_correlation(const CorrelationMatrix& gamma,
                                                             double tol = 1e-9);

/// Tr(C_I rho) = Pf(Gamma_I) for strictly increasing I of even size.
double monomial_expectation(const CorrelationMatrix& gamma, std::span<const ModeIndex> indices);

/// Sum_I J_I Pf(Gamma_I).
double hamiltonian_expectation(const CorrelationMatrix& gamma, const MajoranaHamiltonian& h);

ConsistencyVerdict classify_consistency(const Matching& m, std::span<const ModeIndex> indices);

/// Closed form for a single monomial: sign(pi) * prod lambda, or 0.
double matching_term_expectation(const MatchingState& state, std::span<const ModeIndex> indices);

/// Tr(H rho(M, lambda)) summed over consistent terms only.
double matching_state_expectation(const MatchingState& state, const MajoranaHamiltonian& h);

/// Dimer signs giving each target J_I C_I the contribution +|J_I|.
///
/// Targets must be pairwise disjoint and consistent with `m`; pairs not
/// touched by any target keep +1.
std::vector<int> assign_signs(const Matching& m, std::span<const InteractionTerm> targets);

struct ConditionedState {
  double probability = 0.0;
  CorrelationMatrix gamma;  // on the remaining Majoranas, in increasing order
};

/// Projects onto outcome `outcome` (+1/-1) of the dimer operator i c_a c_b and
/// returns the Gaussian conditional state on the other Majoranas.
///
/// p = (1 + outcome * Gamma_ab) / 2 and
/// Gamma'_ij = Gamma_ij + outcome (Gamma_ib Gamma_ja - Gamma_ia Gamma_jb) / (2p).
/// Throws kImpossibleOutcome when p vanishes.
ConditionedState condition_on_dimer(const CorrelationMatrix& gamma, ModeIndex a, ModeIndex b,
                                    int outcome);

}  // namespace fermopt
