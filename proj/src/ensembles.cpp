#include "fermopt/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "fermopt/rng.hpp"

namespace fermopt {

namespace {

constexpr std::uint64_t kTagCount = 1;
constexpr std::uint64_t kTagRank = 2;
constexpr std::uint64_t kTagCoeff = 3;
constexpr std::uint64_t kTagPlace = 4;
constexpr std::uint64_t kTagSparseCoeff = 5;
constexpr std::uint64_t kTagColored = 7;

// Lexicographic unranking of an r-subset of [0, m).
IndexSet unrank(std::uint64_t rank, int m, int r) {
  IndexSet out;
  int next = 0;
  for (int slot = r; slot > 0; --slot) {
    for (int a = next;; ++a) {
      const auto block = static_cast<std::uint64_t>(binomial(m - a - 1, slot - 1));
      if (rank < block) {
        out.push_back(a);
        next = a + 1;
        break;
      }
      rank -= block;
    }
  }
  return out;
}

std::uint64_t binomial_draw(double u, std::uint64_t trials, double p) {
  if (p >= 1.0) return trials;
  if (p <= 0.0 || trials == 0) return 0;
  const double ratio = p / (1.0 - p);
  double pmf = std::exp(static_cast<double>(trials) * std::log1p(-p));
  double cdf = pmf;
  std::uint64_t j = 0;
  while (u > cdf && j < trials) {
    pmf *= static_cast<double>(trials - j) / static_cast<double>(j + 1) * ratio;
    ++j;
    cdf += pmf;
    if (pmf == 0.0 && cdf < u) break;
  }
  return j;
}

// Floyd's algorithm: `count` distinct values from [0, bound).
std::vector<std::uint64_t> distinct_sample(CounterRng& rng, std::uint64_t bound, std::uint64_t count) {
  std::set<std::uint64_t> chosen;
  for (std::uint64_t j = bound - count; j < bound; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  return {chosen.begin(), chosen.end()};
}

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::kSykQ: return "syk";
    case Family::kSsyk4: return "ssyk";
    case Family::kSparseRandom: return "sparse";
    case Family::kTwoColored: return "two-colored";
  }
  return "unknown";
}

Family parse_family(const std::string& name) {
  if (name == "syk") return Family::kSykQ;
  if (name == "ssyk") return Family::kSsyk4;
  if (name == "sparse") return Family::kSparseRandom;
  if (name == "two-colored") return Family::kTwoColored;
  throw Error(ErrorCode::kInvalidArgument, "unknown family '" + name + "'");
}

std::string serialize_spec(const EnsembleSpec& spec) {
  nlohmann::ordered_json s;
  s["family"] = to_string(spec.family);
  s["n_modes"] = spec.n_modes;
  s["q"] = spec.q;
  s["k"] = spec.k;
  s["n1"] = spec.n1;
  s["n2"] = spec.n2;
  s["seed"] = spec.seed;
  s["dist"] = spec.dist == CoeffDist::kNormal ? "normal" : "rademacher";
  s["weights"] = spec.weights;
  nlohmann::ordered_json doc;
  doc["spec"] = s;
  return doc.dump(1) + "\n";
}

EnsembleSpec parse_spec(const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    const auto& s = doc.contains("spec") ? doc.at("spec") : doc;
    EnsembleSpec spec;
    spec.family = parse_family(s.at("family").get<std::string>());
    spec.n_modes = s.value("n_modes", 0);
    spec.q = s.value("q", 4);
    spec.k = s.value("k", 1);
    spec.n1 = s.value("n1", 0);
    spec.n2 = s.value("n2", 0);
    spec.seed = s.at("seed").get<std::uint64_t>();
    spec.dist = s.value("dist", std::string("normal")) == "rademacher" ? CoeffDist::kRademacher
                                                                     : CoeffDist::kNormal;
    spec.weights = s.value("weights", std::vector<int>{});
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedDocument, std::string("malformed ensemble spec: ") + e.what());
  }
}

double binomial(int n, int r) {
  if (r < 0 || n < 0 || r > n) return 0.0;
  r = std::min(r, n - r);
  double c = 1.0;
  for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return std::round(c);
}

std::vector<IndexSet> combinations(int n, int r) {
  std::vector<IndexSet> out;
  if (r < 0 || r > n) return out;
  IndexSet cur(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) cur[static_cast<std::size_t>(i)] = i;
  for (;;) {
    out.push_back(cur);
    int i = r - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - r + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < r; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

MajoranaHamiltonian gen_syk_q(int n, int q, std::uint64_t seed) {
  if (n < 1 || q < 2 || q % 2 != 0 || 2 * n < q) {
    throw Error(ErrorCode::kInvalidArgument, "SYK-q needs even q >= 2 and 2n >= q");
  }
  const auto sets = combinations(2 * n, q);
  const double scale = 1.0 / std::sqrt(static_cast<double>(sets.size()));
  std::vector<InteractionTerm> terms;
  terms.reserve(sets.size());
  for (std::size_t r = 0; r < sets.size(); ++r) {
    CounterRng rng(seed, substream(kTagCoeff, r));
    terms.push_back({sets[r], rng.normal() * scale});
  }
  return MajoranaHamiltonian(n, std::move(terms));
}

double ssyk_probability(int n, int k) {
  return std::min(1.0, static_cast<double>(k) / binomial(2 * n - 1, 3));
}

MajoranaHamiltonian gen_ssyk(int n, int k, std::uint64_t seed) {
  if (n < 2 || k < 1) throw Error(ErrorCode::kInvalidArgument, "sparse SYK needs n >= 2 and k >= 1");
  const int majoranas = 2 * n;
  const double p = ssyk_probability(n, k);
  const double scale = 1.0 / std::sqrt(2.0 * k * n);
  std::vector<InteractionTerm> terms;
  std::uint64_t offset = 0;
  for (int first = 0; first + 3 < majoranas; ++first) {
    const int rest = majoranas - 1 - first;
    const auto block = static_cast<std::uint64_t>(binomial(rest, 3));
    CounterRng count_rng(seed, substream(kTagCount, static_cast<std::uint64_t>(first)));
    const std::uint64_t count = binomial_draw(count_rng.uniform(), block, p);
    if (count > 0) {
      CounterRng rank_rng(seed, substream(kTagRank, static_cast<std::uint64_t>(first)));
      for (std::uint64_t local : distinct_sample(rank_rng, block, count)) {
        IndexSet tail = unrank(local, rest, 3);
        IndexSet idx{first};
        for (int t : tail) idx.push_back(first + 1 + t);
        CounterRng coeff_rng(seed, substream(kTagCoeff, offset + local));
        terms.push_back({std::move(idx), coeff_rng.normal() * scale});
      }
    }
    offset += block;
  }
  return MajoranaHamiltonian(n, std::move(terms));
}

MajoranaHamiltonian gen_sparse_random(int n, int q, int k, CoeffDist dist, std::uint64_t seed,
                                      const std::vector<int>& weights) {
  std::vector<int> ws = weights.empty() ? std::vector<int>{q} : weights;
  for (int w : ws) {
    if (w < 2 || w % 2 != 0) throw Error(ErrorCode::kOddWeight, "term weights must be even and >= 2");
  }
  const int majoranas = 2 * n;
  const int min_w = *std::min_element(ws.begin(), ws.end());
  if (n < 1 || k < 1 || majoranas < min_w) {
    throw Error(ErrorCode::kInfeasible, "infeasible sparse parameters: n=" + std::to_string(n) +
                                            " q=" + std::to_string(q) + " k=" + std::to_string(k));
  }
  CounterRng rng(seed, substream(kTagPlace, 0));
  std::vector<int> degree(static_cast<std::size_t>(majoranas), 0);
  std::set<IndexSet> placed;
  std::vector<IndexSet> order;
  const int budget = 64 * (majoranas * k / min_w + 1);
  int failures = 0;
  while (failures < budget) {
    std::vector<int> avail;
    for (int i = 0; i < majoranas; ++i) {
      if (degree[static_cast<std::size_t>(i)] < k) avail.push_back(i);
    }
    if (static_cast<int>(avail.size()) < min_w) break;
    const int w = ws[static_cast<std::size_t>(rng.below(ws.size()))];
    if (static_cast<int>(avail.size()) < w) {
      ++failures;
      continue;
    }
    for (int j = 0; j < w; ++j) {
      const auto pick = j + static_cast<int>(rng.below(avail.size() - static_cast<std::size_t>(j)));
      std::swap(avail[static_cast<std::size_t>(j)], avail[static_cast<std::size_t>(pick)]);
    }
    IndexSet idx(avail.begin(), avail.begin() + w);
    std::sort(idx.begin(), idx.end());
    if (!placed.insert(idx).second) {
      ++failures;
      continue;
    }
    for (int i : idx) ++degree[static_cast<std::size_t>(i)];
    order.push_back(std::move(idx));
  }
  if (order.empty()) {
    throw Error(ErrorCode::kInfeasible, "infeasible sparse parameters: no term could be placed");
  }
  std::vector<InteractionTerm> terms;
  terms.reserve(order.size());
  for (std::size_t t = 0; t < order.size(); ++t) {
    CounterRng coeff_rng(seed, substream(kTagSparseCoeff, t));
    const double c = dist == CoeffDist::kNormal ? coeff_rng.normal() : coeff_rng.sign();
    terms.push_back({std::move(order[t]), c});
  }
  return MajoranaHamiltonian(n, std::move(terms));
}

TwoColoredModel gen_two_colored(int n1, int n2, int q, std::uint64_t seed) {
  if (q < 4 || q % 2 != 0 || n2 < 1 || n2 > n1 || n1 < q - 1 || (n1 + n2) % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "2-colored SYK needs even q >= 4, 1 <= n2 <= n1, n1 >= q-1 and n1 + n2 even");
  }
  TwoColoredModel model;
  model.n1 = n1;
  model.n2 = n2;
  model.q = q;
  const double scale = 1.0 / std::sqrt(n2 * binomial(n1, q - 1));
  std::vector<InteractionTerm> terms;
  std::uint64_t rank = 0;
  for (const auto& s : combinations(n1, q - 1)) {
    for (int j = 0; j < n2; ++j, ++rank) {
      CounterRng rng(seed, substream(kTagColored, rank));
      const double raw = rng.normal();
      IndexSet idx = s;
      idx.push_back(n1 + j);
      terms.push_back({std::move(idx), raw * scale});
      model.labels.push_back({s, j, raw});
    }
  }
  model.h = MajoranaHamiltonian((n1 + n2) / 2, std::move(terms));
  return model;
}

TwoColoredModel infer_two_colored(const MajoranaHamiltonian& h) {
  if (h.empty()) throw Error(ErrorCode::kInvalidArgument, "empty Hamiltonian is not 2-colored");
  TwoColoredModel model;
  model.q = h[0].weight();
  model.n1 = h.n_majoranas();
  for (const auto& t : h.terms()) model.n1 = std::min(model.n1, t.indices.back());
  model.n2 = h.n_majoranas() - model.n1;
  if (model.q < 4 || model.n2 < 1 || model.n2 > model.n1) {
    throw Error(ErrorCode::kInvalidArgument, "Hamiltonian does not have 2-colored structure");
  }
  const double scale = std::sqrt(model.n2 * binomial(model.n1, model.q - 1));
  for (const auto& t : h.terms()) {
    if (t.weight() != model.q || t.indices[t.indices.size() - 2] >= model.n1) {
      throw Error(ErrorCode::kInvalidArgument, "Hamiltonian does not have 2-colored structure");
    }
    IndexSet s(t.indices.begin(), t.indices.end() - 1);
    model.labels.push_back({std::move(s), t.indices.back() - model.n1, t.coeff * scale});
  }
  model.h = h;
  return model;
}

MajoranaHamiltonian generate(const EnsembleSpec& spec) {
  switch (spec.family) {
    case Family::kSykQ: return gen_syk_q(spec.n_modes, spec.q, spec.seed);
    case Family::kSsyk4: return gen_ssyk(spec.n_modes, spec.k, spec.seed);
    case Family::kSparseRandom:
      return gen_sparse_random(spec.n_modes, spec.q, spec.k, spec.dist, spec.seed, spec.weights);
    case Family::kTwoColored: return gen_two_colored(spec.n1, spec.n2, spec.q, spec.seed).h;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown family");
}

}  // namespace fermopt
