#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fermopt/error.hpp"

namespace fermopt {

// 0-based Majorana label in [0, 2 * n_modes).
using ModeIndex = int;
using IndexSet = std::vector<ModeIndex>;

/// A coefficient-weighted Majorana monomial J * C_I with
/// C_I = i^{|I|/2} c_{i_1} ... c_{i_|I|}, indices strictly increasing.
struct InteractionTerm {
  IndexSet indices;
  double coeff = 0.0;

  int weight() const { return static_cast<int>(indices.size()); }
  friend bool operator==(const InteractionTerm&, const InteractionTerm&) = default;
};

/// Sum of Hermitian traceless Majorana monomials on 2 * n_modes Majoranas.
///
/// Construction validates every term (even weight >= 2, strictly increasing,
/// in range, finite coefficient) and rejects repeated index sets. Instances
/// are immutable afterwards.
class MajoranaHamiltonian {
 public:
  MajoranaHamiltonian() = default;
  MajoranaHamiltonian(int n_modes, std::vector<InteractionTerm> terms);

  int n_modes() const { return n_modes_; }
  int n_majoranas() const { return 2 * n_modes_; }
  const std::vector<InteractionTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const InteractionTerm& operator[](std::size_t i) const { return terms_[i]; }

  /// Sub-Hamiltonian on the same modes holding the listed terms, in the
  /// order given.
  MajoranaHamiltonian subset(std::span<const int> term_ids) const;

  friend bool operator==(const MajoranaHamiltonian&, const MajoranaHamiltonian&) = default;

 private:
  int n_modes_ = 0;
  std::vector<InteractionTerm> terms_;
};

struct SparsityProfile {
  std::vector<int> degree;  // indexed by ModeIndex
  int max_degree = 0;
  std::set<int> weights_present;
};

/// Sorts `indices` and returns the parity of the sorting permutation.
/// Throws kRepeatedMajorana on duplicates.
std::pair<IndexSet, int> canonical_sign(std::span<const ModeIndex> indices);

/// Parity (+1/-1) of the permutation taking `sequence` to sorted order.
/// Entries must be pairwise distinct.
int permutation_parity(std::span<const ModeIndex> sequence);

SparsityProfile sparsity_profile(const MajoranaHamiltonian& h);

/// Sum of |J_I|; upper-bounds lambda_max(H) by the triangle inequality.
double total_strength(const MajoranaHamiltonian& h);
double total_strength(const MajoranaHamiltonian& h, std::span<const int> term_ids);

/// Throws on the first violated term invariant (weight, order, range).
void validate_indices(std::span<const ModeIndex> indices, int n_modes);

/// Union of the supports of the listed terms, sorted.
IndexSet support(const MajoranaHamiltonian& h, std::span<const int> term_ids);

bool intersects(std::span<const ModeIndex> a, std::span<const ModeIndex> b);

/// Hamiltonian JSON: {"n_modes": int, "terms": [{"indices": [...], "coeff": x}]}
MajoranaHamiltonian parse_hamiltonian(const std::string& text);
std::string serialize_hamiltonian(const MajoranaHamiltonian& h);

MajoranaHamiltonian load_hamiltonian(const std::string& path);
void save_hamiltonian(const MajoranaHamiltonian& h, const std::string& path);

}  // namespace fermopt
