#include "fermopt/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fermopt {

Matching::Matching(int n_majoranas, std::vector<Dimer> pairs) : pairs_(std::move(pairs)) {
  if (n_majoranas < 0 || n_majoranas % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument, "matching needs an even number of Majoranas");
  }
  if (static_cast<int>(pairs_.size()) * 2 != n_majoranas) {
    throw Error(ErrorCode::kInvalidArgument, "matching has " + std::to_string(pairs_.size()) +
                                                 " pairs for " + std::to_string(n_majoranas) +
                                                 " Majoranas");
  }
  partner_.assign(static_cast<std::size_t>(n_majoranas), -1);
  pair_of_.assign(static_cast<std::size_t>(n_majoranas), -1);
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    const auto [a, b] = pairs_[p];
    if (a < 0 || b >= n_majoranas || a >= b) {
      throw Error(ErrorCode::kInvalidArgument,
                  "invalid pair (" + std::to_string(a) + "," + std::to_string(b) + ")");
    }
    for (ModeIndex x : {a, b}) {
      if (partner_[static_cast<std::size_t>(x)] != -1) {
        throw Error(ErrorCode::kRepeatedMajorana,
                    "Majorana " + std::to_string(x) + " matched twice");
      }
    }
    partner_[static_cast<std::size_t>(a)] = b;
    partner_[static_cast<std::size_t>(b)] = a;
    pair_of_[static_cast<std::size_t>(a)] = static_cast<int>(p);
    pair_of_[static_cast<std::size_t>(b)] = static_cast<int>(p);
  }
}

MatchingState::MatchingState(Matching m, std::vector<int> s)
    : matching(std::move(m)), signs(std::move(s)) {
  if (signs.size() != matching.size()) {
    throw Error(ErrorCode::kInvalidArgument, "one sign per matched pair required");
  }
  for (int v : signs) {
    if (v != 1 && v != -1) throw Error(ErrorCode::kInvalidArgument, "dimer signs must be +1 or -1");
  }
}

MatchingState::MatchingState(Matching m)
    : matching(std::move(m)), signs(matching.size(), 1) {}

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXd gamma) {
  if (gamma.rows() != gamma.cols() || gamma.rows() % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument, "correlation matrix must be square of even size");
  }
  if (gamma.size() > 0) {
    const double asym = (gamma + gamma.transpose()).cwiseAbs().maxCoeff();
    if (asym > kAntisymmetryTol) {
      throw Error(ErrorCode::kInvalidArgument, "correlation matrix is not antisymmetric");
    }
    gamma_ = 0.5 * (gamma - gamma.transpose());
    const double top = Eigen::JacobiSVD<Eigen::MatrixXd>(gamma_).singularValues()(0);
    if (top > 1.0 + 1e-9) {
      throw Error(ErrorCode::kInvalidArgument,
                  "correlation matrix has singular value " + std::to_string(top) + " > 1");
    }
  }
}

bool CorrelationMatrix::is_pure(double tol) const {
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(gamma_.rows(), gamma_.cols());
  return gamma_.size() == 0 || (gamma_.transpose() * gamma_ - eye).cwiseAbs().maxCoeff() <= tol;
}

CorrelationMatrix correlation_from_matching(const MatchingState& state) {
  const int n = state.n_majoranas();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  const auto& pairs = state.matching.pairs();
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    g(pairs[p].first, pairs[p].second) = state.signs[p];
    g(pairs[p].second, pairs[p].first) = -state.signs[p];
  }
  return CorrelationMatrix(std::move(g));
}

std::optional<MatchingState> matching_state_from_correlation(const CorrelationMatrix& gamma,
                                                             double tol) {
  const int n = gamma.n_majoranas();
  std::vector<Dimer> pairs;
  std::vector<int> signs;
  for (int a = 0; a < n; ++a) {
    int hit = -1;
    for (int b = 0; b < n; ++b) {
      const double v = std::abs(gamma(a, b));
      if (std::abs(v - 1.0) <= tol) {
        if (hit != -1) return std::nullopt;
        hit = b;
      } else if (v > tol) {
        return std::nullopt;
      }
    }
    if (hit == -1) return std::nullopt;
    if (a < hit) {
      pairs.emplace_back(a, hit);
      signs.push_back(gamma(a, hit) > 0 ? 1 : -1);
    }
  }
  try {
    return MatchingState(Matching(n, std::move(pairs)), std::move(signs));
  } catch (const Error&) {
    return std::nullopt;
  }
}

namespace {

void require_even_increasing(std::span<const ModeIndex> indices, int n_majoranas) {
  if (indices.size() % 2 != 0) {
    throw Error(ErrorCode::kOddWeight, "monomial expectation needs an even index set");
  }
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= n_majoranas) {
      throw Error(ErrorCode::kIndexOutOfRange, "index " + std::to_string(indices[i]) +
                                                   " outside the correlation matrix");
    }
    if (i > 0 && indices[i] <= indices[i - 1]) {
      throw Error(ErrorCode::kNotIncreasing, "index set must be strictly increasing");
    }
  }
}

}  // namespace

double monomial_expectation(const CorrelationMatrix& gamma, std::span<const ModeIndex> indices) {
  require_even_increasing(indices, gamma.n_majoranas());
  const auto m = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXd sub(m, m);
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index c = 0; c < m; ++c) sub(r, c) = gamma(indices[r], indices[c]);
  }
  return pfaffian_unchecked(sub);
}

double hamiltonian_expectation(const CorrelationMatrix& gamma, const MajoranaHamiltonian& h) {
  if (h.n_majoranas() != gamma.n_majoranas()) {
    throw Error(ErrorCode::kInvalidArgument, "state and Hamiltonian disagree on the mode count");
  }
  double e = 0.0;
  for (const auto& t : h.terms()) e += t.coeff * monomial_expectation(gamma, t.indices);
  return e;
}

ConsistencyVerdict classify_consistency(const Matching& m, std::span<const ModeIndex> indices) {
  ConsistencyVerdict verdict;
  if (indices.size() % 2 != 0) return verdict;
  std::vector<ModeIndex> sorted(indices.begin(), indices.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<ModeIndex> arranged;
  arranged.reserve(sorted.size());
  for (ModeIndex i : sorted) {
    const ModeIndex j = m.partner(i);
    if (!std::binary_search(sorted.begin(), sorted.end(), j)) return verdict;
    if (i < j) {
      arranged.push_back(i);
      arranged.push_back(j);
      verdict.inner_pairs.push_back(m.pair_of(i));
    }
  }
  verdict.consistent = true;
  verdict.sign = permutation_parity(arranged);
  return verdict;
}

double matching_term_expectation(const MatchingState& state, std::span<const ModeIndex> indices) {
  const auto verdict = classify_consistency(state.matching, indices);
  if (!verdict.consistent) return 0.0;
  int value = verdict.sign;
  for (int p : verdict.inner_pairs) value *= state.signs[static_cast<std::size_t>(p)];
  return value;
}

double matching_state_expectation(const MatchingState& state, const MajoranaHamiltonian& h) {
  if (h.n_majoranas() != state.n_majoranas()) {
    throw Error(ErrorCode::kInvalidArgument, "state and Hamiltonian disagree on the mode count");
  }
  double e = 0.0;
  for (const auto& t : h.terms()) {
    const double v = matching_term_expectation(state, t.indices);
    if (v != 0.0) e += t.coeff * v;
  }
  return e;
}

std::vector<int> assign_signs(const Matching& m, std::span<const InteractionTerm> targets) {
  std::vector<int> owner(static_cast<std::size_t>(m.n_majoranas()), -1);
  for (std::size_t t = 0; t < targets.size(); ++t) {
    for (ModeIndex i : targets[t].indices) {
      auto& slot = owner.at(static_cast<std::size_t>(i));
      if (slot != -1) {
        throw Error(ErrorCode::kTargetsNotDisjoint,
                    "targets not disjoint: Majorana " + std::to_string(i) + " is shared");
      }
      slot = static_cast<int>(t);
    }
  }
  std::vector<int> signs(m.size(), 1);
  for (const auto& target : targets) {
    const auto verdict = classify_consistency(m, target.indices);
    if (!verdict.consistent) {
      throw Error(ErrorCode::kInconsistentTarget, "target term is inconsistent with the matching");
    }
    if (target.coeff * verdict.sign < 0.0 && !verdict.inner_pairs.empty()) {
      signs[static_cast<std::size_t>(verdict.inner_pairs.front())] = -1;
    }
  }
  return signs;
}

ConditionedState condition_on_dimer(const CorrelationMatrix& gamma, ModeIndex a, ModeIndex b,
                                    int outcome) {
  const int n = gamma.n_majoranas();
  if (a < 0 || b >= n || a >= b) {
    throw Error(ErrorCode::kInvalidArgument, "dimer must satisfy 0 <= a < b < 2n");
  }
  if (outcome != 1 && outcome != -1) {
    throw Error(ErrorCode::kInvalidArgument, "dimer outcome must be +1 or -1");
  }
  const double s = outcome;
  const double p = 0.5 * (1.0 + s * gamma(a, b));
  if (p <= 1e-14) {
    throw Error(ErrorCode::kImpossibleOutcome, "impossible outcome: probability vanishes");
  }
  std::vector<ModeIndex> rest;
  rest.reserve(static_cast<std::size_t>(n - 2));
  for (ModeIndex i = 0; i < n; ++i) {
    if (i != a && i != b) rest.push_back(i);
  }
  const auto m = static_cast<Eigen::Index>(rest.size());
  Eigen::MatrixXd g(m, m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const ModeIndex i = rest[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < m; ++c) {
      const ModeIndex j = rest[static_cast<std::size_t>(c)];
      g(r, c) = gamma(i, j) +
                s * (gamma(i, b) * gamma(j, a) - gamma(i, a) * gamma(j, b)) / (2.0 * p);
    }
  }
  return {p, CorrelationMatrix(std::move(g))};
}

}  // namespace fermopt
