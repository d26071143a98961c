#include "fermopt/fermion_core.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace fermopt {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedDocument: return "malformed document";
    case ErrorCode::kOddWeight: return "odd weight";
    case ErrorCode::kIndexOutOfRange: return "index out of range";
    case ErrorCode::kDuplicateTerm: return "duplicate term";
    case ErrorCode::kRepeatedMajorana: return "repeated Majorana";
    case ErrorCode::kNotIncreasing: return "indices not increasing";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kBudgetExceeded: return "budget exceeded";
    case ErrorCode::kDiracConditionUnmet: return "Dirac condition unmet";
    case ErrorCode::kImpossibleOutcome: return "impossible outcome";
    case ErrorCode::kTargetsNotDisjoint: return "targets not disjoint";
    case ErrorCode::kInconsistentTarget: return "inconsistent target";
    case ErrorCode::kMatchingFailed: return "matching failed";
    case ErrorCode::kContractViolation: return "contract violation";
    case ErrorCode::kInfeasible: return "infeasible";
  }
  return "unknown";
}

int permutation_parity(std::span<const ModeIndex> sequence) {
  // Cycle decomposition on the ranks: parity = (-1)^(len - #cycles).
  const std::size_t m = sequence.size();
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return sequence[a] < sequence[b]; });
  std::vector<bool> seen(m, false);
  std::size_t transpositions = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = order[j]) {
      seen[j] = true;
      ++len;
    }
    transpositions += len - 1;
  }
  return transpositions % 2 == 0 ? 1 : -1;
}

std::pair<IndexSet, int> canonical_sign(std::span<const ModeIndex> indices) {
  IndexSet sorted(indices.begin(), indices.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::kRepeatedMajorana, "repeated Majorana in index list");
  }
  return {std::move(sorted), permutation_parity(indices)};
}

void validate_indices(std::span<const ModeIndex> indices, int n_modes) {
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= 2 * n_modes) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "Majorana index " + std::to_string(indices[i]) + " outside [0, " +
                      std::to_string(2 * n_modes) + ")");
    }
  }
  {
    IndexSet sorted(indices.begin(), indices.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorCode::kRepeatedMajorana, "repeated Majorana in term");
    }
  }
  if (indices.empty() || indices.size() % 2 != 0) {
    throw Error(ErrorCode::kOddWeight,
                "term weight must be even and >= 2, got " + std::to_string(indices.size()));
  }
  if (!std::is_sorted(indices.begin(), indices.end())) {
    throw Error(ErrorCode::kNotIncreasing, "term indices must be strictly increasing");
  }
}

MajoranaHamiltonian::MajoranaHamiltonian(int n_modes, std::vector<InteractionTerm> terms)
    : n_modes_(n_modes), terms_(std::move(terms)) {
  if (n_modes_ <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "n_modes must be positive");
  }
  std::map<IndexSet, std::size_t> seen;
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    const auto& term = terms_[t];
    validate_indices(term.indices, n_modes_);
    if (!std::isfinite(term.coeff)) {
      throw Error(ErrorCode::kInvalidArgument, "non-finite coefficient in term " + std::to_string(t));
    }
    auto [it, inserted] = seen.emplace(term.indices, t);
    if (!inserted) {
      throw Error(ErrorCode::kDuplicateTerm, "terms " + std::to_string(it->second) + " and " +
                                                 std::to_string(t) + " share an index set");
    }
  }
}

MajoranaHamiltonian MajoranaHamiltonian::subset(std::span<const int> term_ids) const {
  std::vector<InteractionTerm> picked;
  picked.reserve(term_ids.size());
  for (int id : term_ids) picked.push_back(terms_.at(static_cast<std::size_t>(id)));
  return MajoranaHamiltonian(n_modes_, std::move(picked));
}

SparsityProfile sparsity_profile(const MajoranaHamiltonian& h) {
  SparsityProfile profile;
  profile.degree.assign(static_cast<std::size_t>(h.n_majoranas()), 0);
  for (const auto& term : h.terms()) {
    profile.weights_present.insert(term.weight());
    for (ModeIndex i : term.indices) ++profile.degree[static_cast<std::size_t>(i)];
  }
  for (int d : profile.degree) profile.max_degree = std::max(profile.max_degree, d);
  return profile;
}

double total_strength(const MajoranaHamiltonian& h) {
  double s = 0.0;
  for (const auto& term : h.terms()) s += std::abs(term.coeff);
  return s;
}

double total_strength(const MajoranaHamiltonian& h, std::span<const int> term_ids) {
  double s = 0.0;
  for (int id : term_ids) s += std::abs(h[static_cast<std::size_t>(id)].coeff);
  return s;
}

IndexSet support(const MajoranaHamiltonian& h, std::span<const int> term_ids) {
  IndexSet sup;
  for (int id : term_ids) {
    const auto& idx = h[static_cast<std::size_t>(id)].indices;
    sup.insert(sup.end(), idx.begin(), idx.end());
  }
  std::sort(sup.begin(), sup.end());
  sup.erase(std::unique(sup.begin(), sup.end()), sup.end());
  return sup;
}

bool intersects(std::span<const ModeIndex> a, std::span<const ModeIndex> b) {
  // Both sorted.
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

}  // namespace fermopt
