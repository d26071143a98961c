#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fermopt/combinatorics.hpp"
#include "fermopt/fermion_core.hpp"
#include "fermopt/gaussian.hpp"

namespace fermopt {

enum class Pipeline { kStrictQ, kMixed24, kSsyk };

const char* to_string(Pipeline p);
Pipeline parse_pipeline(const std::string& name);  // strictq | mixed24 | ssyk

struct RatioCertificate {
  Pipeline pipeline = Pipeline::kStrictQ;
  double achieved = 0.0;
  double upper_bound = 0.0;
  long long Q = 0;
  double guaranteed_ratio = 0.0;
  bool guarantee_holds = false;
  std::vector<std::string> notes;
};

struct PipelineResult {
  MatchingState state;
  RatioCertificate certificate;
  PartKey selected;
  std::vector<int> selected_terms;
  double selected_weight = 0.0;
  bool used_fallback = false;
};

/// Q = q(q-1)(k-1)^2 + q(k-1) + 2.
long long strict_q_constant(int q, int k);

/// Strictly q-local pipeline: diffuse partition, heaviest part (ties to the lowest
/// key), matching for that part, and dimer signs saturating it.
PipelineResult optimize_strict_q(const MajoranaHamiltonian& h);

struct LiftedHamiltonian {
  MajoranaHamiltonian base;
  MajoranaHamiltonian lifted;  // term t of base maps to term t of lifted
  std::vector<int> weight2_ids;
  std::vector<int> weight4_ids;
};

/// Weight-2 terms {j1, j2} become {j1, j2, 2n, 2n+1} with coefficient -J;
/// quartic terms are copied onto 2n+2 Majoranas.
LiftedHamiltonian lift_to_strict4(const MajoranaHamiltonian& h);

struct BranchState {
  MatchingState lifted_state;  // on 2n+2
  double lifted_energy = 0.0;  // Tr(H~ rho~)
  bool used_fallback = false;
  std::optional<Dimer> marked_edge;
};

/// Matching for a weight-2 part, extended by the dimer (2n, 2n+1) with sign -1.
BranchState build_weight2_branch(const LiftedHamiltonian& lh, std::span<const int> part);

/// Matching for a quartic part with a marked outer edge (i1, i2) rewired to
/// (i1, 2n), (i2, 2n+1).
BranchState build_weight4_branch(const LiftedHamiltonian& lh, std::span<const int> part,
                                 const DiffuseMatchingOptions& options = {});

struct PullBackResult {
  MatchingState state;
  double energy = 0.0;         // Tr(H rho)
  double lifted_energy = 0.0;  // Tr(H~ rho~)
  int outcome = 0;             // dimer outcome used, 0 if the dimer was unentangled
  int flips = 0;               // double flips applied
};

/// Maps a branch state on 2n+2 Majoranas to a matching state on 2n with
/// Tr(H rho) >= Tr(H~ rho~). Entangled extra Majoranas are measured through
/// the dimer i c_2n c_2n+1 (both outcomes tried); afterwards each consistent
/// quartic term gets both of its inner dimer signs flipped whenever that
/// raises the energy. Throws kContractViolation if the inequality fails by
/// more than 1e-9 * sum |J|.
PullBackResult pull_back(const MatchingState& lifted_state, const LiftedHamiltonian& lh);

/// Q = 12(k-1)^2 + 4(k-1) + 2; the certified ratio is 1/(2Q).
long long mixed24_constant(int k);

struct Mixed24Options {
  bool best_inner_pairing = false;
};

PipelineResult optimize_mixed_24(const MajoranaHamiltonian& h, const Mixed24Options& options = {});

struct Truncation {
  MajoranaHamiltonian sparse;
  MajoranaHamiltonian residual;
  std::vector<int> sparse_ids;    // positions in the input
  std::vector<int> residual_ids;
};

/// Per Majorana, lists its terms in lexicographic order and marks all after
/// the first k'. Terms marked at least once form the residual.
Truncation truncate_to_sparse(const MajoranaHamiltonian& h, int k_prime);

/// Q = 1236 + 2752k + 1536k^2.
long long ssyk_constant(int k);
/// 12k'^2 - 20k' + 10.
long long ssyk_inner_constant(int k_prime);
/// 1/Q' - 32(Q'+1) k e^{-k'} / (sqrt(k'-1) Q').
double ssyk_margin(int k, int k_prime);

struct SsykResult {
  PipelineResult result;
  Truncation truncation;
  int k_prime = 0;
  double sparse_energy = 0.0;    // Tr(H_sparse rho)
  double residual_energy = 0.0;  // Tr(h_residual rho)
  double inner_weight = 0.0;     // sum over the sparse part of |J|
};

SsykResult optimize_ssyk(const MajoranaHamiltonian& h, int k);

/// Chooses strictq for uniform weight, mixed24 for weights within {2, 4}.
PipelineResult optimize_auto(const MajoranaHamiltonian& h);

std::string serialize_certificate(const RatioCertificate& c);
RatioCertificate parse_certificate(const std::string& text);

}  // namespace fermopt
