#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fermopt/fermion_core.hpp"
#include "fermopt/gaussian.hpp"

namespace fermopt {

/// Q' = q(q-1)(k-1)^2 + q(k-1): degree bound of the conflict graph.
long long conflict_degree_bound(int q, int k);

struct DiffuseCheck {
  bool diffuse = true;
  int violated_condition = 0;  // 1, 2 or 3; 0 when diffuse
};

/// Checks the three diffuse conditions of `subset` with respect to all terms
/// of `h`. The support bound uses q = maximal term weight of h.
DiffuseCheck is_diffuse(const MajoranaHamiltonian& h, std::span<const int> subset);

/// Terms are vertices; I1 ~ I2 when they share a Majorana or a third term
/// meets both.
struct ConflictGraph {
  std::vector<std::vector<int>> adjacency;  // sorted neighbour lists

  std::size_t size() const { return adjacency.size(); }
  int max_degree() const;
  bool adjacent(int a, int b) const;
};

ConflictGraph build_conflict_graph(const MajoranaHamiltonian& h);

/// Descending degree, ties broken by lexicographic order of the index sets.
std::vector<int> coloring_order(const ConflictGraph& g, const MajoranaHamiltonian& h);

/// First-fit coloring along `order`; colors are 0-based.
std::vector<int> greedy_color(const ConflictGraph& g, std::span<const int> order);

struct PartKey {
  int half_weight = 0;  // q'
  int alpha = 0;        // 0-based color slot in [0, Q)
  friend auto operator<=>(const PartKey&, const PartKey&) = default;
};

struct DiffusePartition {
  int q = 0;
  int k = 0;
  long long q_prime = 0;  // Q'
  long long Q = 0;        // Q' + 2
  std::map<PartKey, std::vector<int>> parts;  // non-empty parts, ids ascending
  bool all_diffuse = true;
  std::vector<std::string> notes;
};

DiffusePartition diffuse_partition(const MajoranaHamiltonian& h);

/// JSON {"parts": {"(q',alpha)": [ids...]}}.
std::string serialize_partition(const DiffusePartition& p);

/// Symmetric dense adjacency for small graphs.
class DenseGraph {
 public:
  explicit DenseGraph(int n = 0) : n_(n), adj_(static_cast<std::size_t>(n) * n, 0) {}

  int size() const { return n_; }
  bool has(int a, int b) const { return adj_[static_cast<std::size_t>(a) * n_ + b] != 0; }
  void set(int a, int b, bool on);
  int degree(int v) const;
  int min_degree() const;

 private:
  int n_;
  std::vector<std::uint8_t> adj_;
};

/// Hamiltonian cycle of a graph with min degree >= |V|/2 by greedy path
/// extension, closing via a crossing pair, and absorbing outside vertices.
/// Throws kDiracConditionUnmet when |V| < 3 or the degree bound fails.
std::vector<int> hamiltonian_cycle_dense(const DenseGraph& g);

bool is_hamiltonian_cycle(const DenseGraph& g, std::span<const int> cycle);

/// Perfect matching by exhaustive backtracking; empty result when none
/// exists. Intended for at most 16 vertices.
std::optional<std::vector<Dimer>> perfect_matching_search(const DenseGraph& g);

struct DiffuseMatchingOptions {
  // For quartic terms pick, among the three inner pairings, one whose edges
  // coincide with the fewest weight-2 interactions.
  bool best_inner_pairing = false;
  int fallback_limit = 16;
};

struct DiffuseMatching {
  Matching matching;
  std::vector<Dimer> inner;  // M' edges
  std::vector<Dimer> outer;  // M'' edges
  bool used_fallback = false;
  int residual_size = 0;
  int permitted_min_degree = 0;
};

/// M = M' u M'': consecutive pairs inside each term of `subset`, plus a
/// perfect matching of the permitted-edge graph on the remaining Majoranas,
/// taken along a Hamiltonian cycle. Falls back to exhaustive search on small
/// residuals. Throws kDiracConditionUnmet or kMatchingFailed otherwise.
DiffuseMatching diffuse_matching(const MajoranaHamiltonian& h, std::span<const int> subset,
                                 const DiffuseMatchingOptions& options = {});

}  // namespace fermopt
