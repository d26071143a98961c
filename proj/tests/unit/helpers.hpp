#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "fermopt/fermion_core.hpp"
#include "fermopt/gaussian.hpp"

namespace testing {

using fermopt::IndexSet;
using fermopt::InteractionTerm;
using fermopt::MajoranaHamiltonian;
using fermopt::Matching;
using fermopt::MatchingState;

inline IndexSet random_subset(std::mt19937_64& rng, int universe, int size) {
  std::vector<int> all(static_cast<std::size_t>(universe));
  std::iota(all.begin(), all.end(), 0);
  std::shuffle(all.begin(), all.end(), rng);
  IndexSet s(all.begin(), all.begin() + size);
  std::sort(s.begin(), s.end());
  return s;
}

/// Random H with up to `terms` distinct terms whose weights are drawn from `weights`.
inline MajoranaHamiltonian random_hamiltonian(std::mt19937_64& rng, int n_modes, int terms,
                                              std::vector<int> weights = {2, 4}) {
  std::normal_distribution<double> normal;
  std::set<IndexSet> seen;
  std::vector<InteractionTerm> out;
  const int m = 2 * n_modes;
  for (int t = 0; t < terms; ++t) {
    const int w = weights[rng() % weights.size()];
    if (w > m) continue;
    auto s = random_subset(rng, m, w);
    if (!seen.insert(s).second) continue;
    out.push_back({s, normal(rng)});
  }
  return MajoranaHamiltonian(n_modes, out);
}

inline MatchingState random_matching_state(std::mt19937_64& rng, int n_majoranas) {
  std::vector<int> perm(static_cast<std::size_t>(n_majoranas));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<fermopt::Dimer> pairs;
  std::vector<int> signs;
  for (int i = 0; i < n_majoranas; i += 2) {
    pairs.emplace_back(std::min(perm[i], perm[i + 1]), std::max(perm[i], perm[i + 1]));
    signs.push_back(rng() % 2 ? 1 : -1);
  }
  return MatchingState(Matching(n_majoranas, pairs), signs);
}

inline Eigen::MatrixXd random_antisymmetric(std::mt19937_64& rng, int m, bool integer = false) {
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> small(-5, 5);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      a(i, j) = integer ? small(rng) : normal(rng);
      a(j, i) = -a(i, j);
    }
  }
  return a;
}

/// Random pure Gamma = O J O^T with O Haar-ish orthogonal.
inline Eigen::MatrixXd random_pure_gamma(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd o = qr.householderQ();
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; i += 2) {
    j(i, i + 1) = 1.0;
    j(i + 1, i) = -1.0;
  }
  Eigen::MatrixXd out = o * j * o.transpose();
  return 0.5 * (out - out.transpose());
}

/// Pfaffian as the signed sum over perfect matchings, exact for integer input.
inline long double pfaffian_matching_sum(const Eigen::MatrixXd& a) {
  const int m = static_cast<int>(a.rows());
  if (m % 2 != 0) return 0.0L;
  std::vector<int> left(static_cast<std::size_t>(m));
  std::iota(left.begin(), left.end(), 0);
  auto rec = [&](auto&& self, std::vector<int> rest) -> long double {
    if (rest.empty()) return 1.0L;
    const int first = rest[0];
    long double total = 0.0L;
    for (std::size_t j = 1; j < rest.size(); ++j) {
      std::vector<int> sub;
      for (std::size_t t = 1; t < rest.size(); ++t)
        if (t != j) sub.push_back(rest[t]);
      const long double sign = (j % 2 == 1) ? 1.0L : -1.0L;
      total += sign * static_cast<long double>(a(first, rest[j])) * self(self, sub);
    }
    return total;
  };
  return rec(rec, left);
}

inline int inversion_parity(const std::vector<int>& seq) {
  int inv = 0;
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j) inv += seq[i] > seq[j];
  return inv % 2 == 0 ? 1 : -1;
}

inline std::vector<int> recount_degrees(const MajoranaHamiltonian& h) {
  std::vector<int> d(static_cast<std::size_t>(h.n_majoranas()), 0);
  for (const auto& t : h.terms())
    for (int i : t.indices) ++d[static_cast<std::size_t>(i)];
  return d;
}


/// n_modes = 4 instance whose weight-2 terms sit on the consecutive inner
/// edges of a quartic term, with random signs, plus one unrelated quadratic.
inline MajoranaHamiltonian adversarial_instance(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const auto quartic = random_subset(rng, 8, 4);
  std::vector<InteractionTerm> terms{{quartic, normal(rng)}};
  terms.push_back({{quartic[0], quartic[1]}, normal(rng)});
  if (rng() % 2) terms.push_back({{quartic[2], quartic[3]}, normal(rng)});
  std::vector<int> rest;
  for (int i = 0; i < 8; ++i)
    if (!std::binary_search(quartic.begin(), quartic.end(), i)) rest.push_back(i);
  std::shuffle(rest.begin(), rest.end(), rng);
  if (rng() % 2) terms.push_back({{std::min(rest[0], rest[1]), std::max(rest[0], rest[1])}, normal(rng)});
  return MajoranaHamiltonian(4, terms);
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace testing
