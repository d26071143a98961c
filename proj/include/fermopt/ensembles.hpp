#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fermopt/fermion_core.hpp"

namespace fermopt {

enum class Family { kSykQ, kSsyk4, kSparseRandom, kTwoColored };
enum class CoeffDist { kNormal, kRademacher };

const char* to_string(Family f);
Family parse_family(const std::string& name);  // syk | ssyk | sparse | two-colored

struct EnsembleSpec {
  Family family = Family::kSykQ;
  int n_modes = 0;
  int q = 4;
  int k = 1;
  int n1 = 0;
  int n2 = 0;
  std::uint64_t seed = 0;
  CoeffDist dist = CoeffDist::kNormal;
  // SparseRandom only: term weights drawn uniformly from this list; empty
  // means {q}.
  std::vector<int> weights;
};

/// JSON {"spec": {...}} sidecar.
std::string serialize_spec(const EnsembleSpec& spec);
EnsembleSpec parse_spec(const std::string& text);

/// Binomial coefficient as double (exact below 2^53).
double binomial(int n, int r);

/// All index sets of size r from [0, n) in lexicographic order.
std::vector<IndexSet> combinations(int n, int r);

/// Dense SYK-q: all C(2n, q) terms, N(0,1) / sqrt(C(2n, q)); the coefficient
/// of the term with lexicographic rank r comes from substream r.
MajoranaHamiltonian gen_syk_q(int n, int q, std::uint64_t seed);

/// Inclusion probability k / C(2n-1, 3) of the sparse SYK-4 model.
double ssyk_probability(int n, int k);

/// Sparse SYK-4. Each quartic term is kept with ssyk_probability(n, k) and
/// gets an N(0,1) / sqrt(2kn) coefficient.
///
/// Terms are grouped in blocks by their first index. A block draws its
/// binomial count and then a uniform set of that many distinct members from
/// its own substreams, and a kept term's coefficient is keyed by its global
/// lexicographic rank, so no block depends on another.
MajoranaHamiltonian gen_ssyk(int n, int k, std::uint64_t seed);

/// Random k-sparse Hamiltonian by greedy placement on Majoranas whose degree
/// is still below k. Weights come from `weights` (default {q}).
MajoranaHamiltonian gen_sparse_random(int n, int q, int k, CoeffDist dist, std::uint64_t seed,
                                      const std::vector<int>& weights = {});

struct TwoColoredTerm {
  IndexSet subset;  // S, phi labels in [0, n1)
  int chi = 0;      // j in [0, n2)
  double raw = 0.0; // J_{S,j}
};

struct TwoColoredModel {
  int n1 = 0;
  int n2 = 0;
  int q = 0;
  MajoranaHamiltonian h;  // phi modes 0..n1-1, chi modes n1..n1+n2-1
  std::vector<TwoColoredTerm> labels;  // aligned with h.terms()
};

/// 2-colored SYK: terms phi^S chi_j for all |S| = q-1 with coefficient
/// J_{S,j} / sqrt(n2 * C(n1, q-1)). Requires n2 <= n1, q >= 4 even and
/// n1 + n2 even.
TwoColoredModel gen_two_colored(int n1, int n2, int q, std::uint64_t seed);

/// Recovers the labeling from a Hamiltonian laid out as gen_two_colored does.
TwoColoredModel infer_two_colored(const MajoranaHamiltonian& h);

MajoranaHamiltonian generate(const EnsembleSpec& spec);

}  // namespace fermopt
