#include "fermopt/combinatorics.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include <json.hpp>

namespace fermopt {

long long conflict_degree_bound(int q, int k) {
  const long long qq = q;
  const long long km = std::max(k, 1) - 1;
  return qq * (qq - 1) * km * km + qq * km;
}

namespace {

std::vector<std::vector<int>> terms_by_mode(const MajoranaHamiltonian& h) {
  std::vector<std::vector<int>> by_mode(static_cast<std::size_t>(h.n_majoranas()));
  for (std::size_t t = 0; t < h.size(); ++t) {
    for (ModeIndex i : h[t].indices) by_mode[static_cast<std::size_t>(i)].push_back(static_cast<int>(t));
  }
  return by_mode;
}

int max_weight(const MajoranaHamiltonian& h) {
  int q = 0;
  for (const auto& t : h.terms()) q = std::max(q, t.weight());
  return q;
}

}  // namespace

DiffuseCheck is_diffuse(const MajoranaHamiltonian& h, std::span<const int> subset) {
  std::vector<int> owner(static_cast<std::size_t>(h.n_majoranas()), -1);
  std::size_t support_size = 0;
  for (std::size_t s = 0; s < subset.size(); ++s) {
    for (ModeIndex i : h[static_cast<std::size_t>(subset[s])].indices) {
      auto& slot = owner[static_cast<std::size_t>(i)];
      if (slot != -1) return {false, 1};
      slot = static_cast<int>(s);
      ++support_size;
    }
  }
  for (const auto& term : h.terms()) {
    int first = -1;
    for (ModeIndex i : term.indices) {
      const int o = owner[static_cast<std::size_t>(i)];
      if (o == -1) continue;
      if (first == -1) {
        first = o;
      } else if (o != first) {
        return {false, 2};
      }
    }
  }
  const long long q = max_weight(h);
  if (!subset.empty() &&
      static_cast<long long>(support_size) * (q + 1) >= 2 * q * h.n_modes()) {
    return {false, 3};
  }
  return {};
}

int ConflictGraph::max_degree() const {
  int d = 0;
  for (const auto& nb : adjacency) d = std::max(d, static_cast<int>(nb.size()));
  return d;
}

bool ConflictGraph::adjacent(int a, int b) const {
  const auto& nb = adjacency[static_cast<std::size_t>(a)];
  return std::binary_search(nb.begin(), nb.end(), b);
}

ConflictGraph build_conflict_graph(const MajoranaHamiltonian& h) {
  const auto by_mode = terms_by_mode(h);
  ConflictGraph g;
  g.adjacency.resize(h.size());
  for (std::size_t a = 0; a < h.size(); ++a) {
    auto& nb = g.adjacency[a];
    for (ModeIndex i : h[a].indices) {
      for (int mid : by_mode[static_cast<std::size_t>(i)]) {
        if (mid == static_cast<int>(a)) continue;
        nb.push_back(mid);
        for (ModeIndex j : h[static_cast<std::size_t>(mid)].indices) {
          for (int b : by_mode[static_cast<std::size_t>(j)]) {
            if (b != static_cast<int>(a) && b != mid) nb.push_back(b);
          }
        }
      }
    }
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return g;
}

std::vector<int> coloring_order(const ConflictGraph& g, const MajoranaHamiltonian& h) {
  std::vector<int> order(g.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto da = g.adjacency[static_cast<std::size_t>(a)].size();
    const auto db = g.adjacency[static_cast<std::size_t>(b)].size();
    if (da != db) return da > db;
    return h[static_cast<std::size_t>(a)].indices < h[static_cast<std::size_t>(b)].indices;
  });
  return order;
}

std::vector<int> greedy_color(const ConflictGraph& g, std::span<const int> order) {
  std::vector<int> color(g.size(), -1);
  std::vector<char> taken;
  for (int v : order) {
    const auto& nb = g.adjacency[static_cast<std::size_t>(v)];
    taken.assign(nb.size() + 1, 0);
    for (int u : nb) {
      const int c = color[static_cast<std::size_t>(u)];
      if (c >= 0 && c < static_cast<int>(taken.size())) taken[static_cast<std::size_t>(c)] = 1;
    }
    int c = 0;
    while (taken[static_cast<std::size_t>(c)]) ++c;
    color[static_cast<std::size_t>(v)] = c;
  }
  return color;
}

DiffusePartition diffuse_partition(const MajoranaHamiltonian& h) {
  DiffusePartition out;
  const auto profile = sparsity_profile(h);
  out.q = max_weight(h);
  out.k = profile.max_degree;
  out.q_prime = h.empty() ? 0 : conflict_degree_bound(out.q, out.k);
  out.Q = out.q_prime + 2;
  if (h.empty()) return out;

  const auto graph = build_conflict_graph(h);
  const auto order = coloring_order(graph, h);
  const auto color = greedy_color(graph, order);
  for (std::size_t t = 0; t < h.size(); ++t) {
    out.parts[{h[t].weight() / 2, color[t]}].push_back(static_cast<int>(t));
  }

  const int spare = static_cast<int>(out.q_prime + 1);
  for (int half = 1; half <= out.q / 2; ++half) {
    std::vector<PartKey> violators;
    for (const auto& [key, ids] : out.parts) {
      if (key.half_weight == half && is_diffuse(h, ids).violated_condition == 3) {
        violators.push_back(key);
      }
    }
    if (violators.empty()) continue;
    if (violators.size() > 1) {
      out.notes.push_back("more than one part of weight " + std::to_string(2 * half) +
                          " violates the support bound");
    }
    auto& ids = out.parts[violators.front()];
    if (ids.size() < 2) continue;
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
      return h[static_cast<std::size_t>(a)].indices < h[static_cast<std::size_t>(b)].indices;
    });
    const auto keep = static_cast<std::ptrdiff_t>(ids.size() / 2);
    std::vector<int> moved(ids.begin() + keep, ids.end());
    ids.resize(static_cast<std::size_t>(keep));
    std::sort(ids.begin(), ids.end());
    std::sort(moved.begin(), moved.end());
    out.parts[{half, spare}] = std::move(moved);
  }

  for (const auto& [key, ids] : out.parts) {
    const auto check = is_diffuse(h, ids);
    if (!check.diffuse) {
      out.all_diffuse = false;
      out.notes.push_back("part (" + std::to_string(key.half_weight) + "," +
                          std::to_string(key.alpha) + ") violates diffuse condition " +
                          std::to_string(check.violated_condition));
    }
  }
  return out;
}

std::string serialize_partition(const DiffusePartition& p) {
  nlohmann::ordered_json parts = nlohmann::ordered_json::object();
  for (const auto& [key, ids] : p.parts) {
    parts["(" + std::to_string(key.half_weight) + "," + std::to_string(key.alpha) + ")"] = ids;
  }
  nlohmann::ordered_json doc;
  doc["Q"] = p.Q;
  doc["parts"] = parts;
  return doc.dump(1) + "\n";
}

void DenseGraph::set(int a, int b, bool on) {
  adj_[static_cast<std::size_t>(a) * n_ + b] = on;
  adj_[static_cast<std::size_t>(b) * n_ + a] = on;
}

int DenseGraph::degree(int v) const {
  int d = 0;
  for (int u = 0; u < n_; ++u) d += has(v, u) ? 1 : 0;
  return d;
}

int DenseGraph::min_degree() const {
  if (n_ == 0) return 0;
  int d = n_;
  for (int v = 0; v < n_; ++v) d = std::min(d, degree(v));
  return d;
}

namespace {

void extend_path(const DenseGraph& g, std::deque<int>& path, std::vector<char>& used) {
  const auto grow = [&](int end) {
    for (int u = 0; u < g.size(); ++u) {
      if (!used[static_cast<std::size_t>(u)] && g.has(end, u)) return u;
    }
    return -1;
  };
  for (int u; (u = grow(path.back())) != -1;) {
    used[static_cast<std::size_t>(u)] = 1;
    path.push_back(u);
  }
  for (int u; (u = grow(path.front())) != -1;) {
    used[static_cast<std::size_t>(u)] = 1;
    path.push_front(u);
  }
}

std::vector<int> close_path(const DenseGraph& g, const std::deque<int>& p) {
  const std::size_t k = p.size();
  if (g.has(p.front(), p.back())) return {p.begin(), p.end()};
  for (std::size_t i = 0; i + 1 < k; ++i) {
    if (g.has(p.front(), p[i + 1]) && g.has(p[i], p.back())) {
      std::vector<int> cycle(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(i) + 1);
      for (std::size_t j = k; j-- > i + 1;) cycle.push_back(p[j]);
      return cycle;
    }
  }
  throw Error(ErrorCode::kDiracConditionUnmet, "Dirac condition unmet: no crossing pair");
}

}  // namespace

std::vector<int> hamiltonian_cycle_dense(const DenseGraph& g) {
  const int n = g.size();
  if (n < 3 || 2 * g.min_degree() < n) {
    throw Error(ErrorCode::kDiracConditionUnmet,
                "Dirac condition unmet: " + std::to_string(n) + " vertices, min degree " +
                    std::to_string(g.min_degree()));
  }
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::deque<int> path{0};
  used[0] = 1;
  for (;;) {
    extend_path(g, path, used);
    auto cycle = close_path(g, path);
    if (static_cast<int>(cycle.size()) == n) return cycle;

    int outside = -1;
    std::size_t pos = 0;
    for (int u = 0; u < n && outside == -1; ++u) {
      if (used[static_cast<std::size_t>(u)]) continue;
      int best = -1;
      for (std::size_t j = 0; j < cycle.size(); ++j) {
        if (g.has(u, cycle[j]) && (best == -1 || cycle[j] < best)) {
          best = cycle[j];
          pos = j;
        }
      }
      if (best != -1) outside = u;
    }
    if (outside == -1) {
      throw Error(ErrorCode::kDiracConditionUnmet, "Dirac condition unmet: graph disconnected");
    }
    path.clear();
    path.push_back(outside);
    used[static_cast<std::size_t>(outside)] = 1;
    for (std::size_t j = 0; j < cycle.size(); ++j) path.push_back(cycle[(pos + j) % cycle.size()]);
  }
}

bool is_hamiltonian_cycle(const DenseGraph& g, std::span<const int> cycle) {
  const int n = g.size();
  if (static_cast<int>(cycle.size()) != n || n < 3) return false;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int v : cycle) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = 1;
  }
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    if (!g.has(cycle[i], cycle[(i + 1) % cycle.size()])) return false;
  }
  return true;
}

namespace {

bool match_rest(const DenseGraph& g, std::vector<int>& mate, std::vector<Dimer>& out) {
  int v = 0;
  while (v < g.size() && mate[static_cast<std::size_t>(v)] != -1) ++v;
  if (v == g.size()) return true;
  for (int u = v + 1; u < g.size(); ++u) {
    if (mate[static_cast<std::size_t>(u)] != -1 || !g.has(v, u)) continue;
    mate[static_cast<std::size_t>(v)] = u;
    mate[static_cast<std::size_t>(u)] = v;
    out.emplace_back(v, u);
    if (match_rest(g, mate, out)) return true;
    out.pop_back();
    mate[static_cast<std::size_t>(v)] = -1;
    mate[static_cast<std::size_t>(u)] = -1;
  }
  return false;
}

}  // namespace

std::optional<std::vector<Dimer>> perfect_matching_search(const DenseGraph& g) {
  if (g.size() % 2 != 0) return std::nullopt;
  std::vector<int> mate(static_cast<std::size_t>(g.size()), -1);
  std::vector<Dimer> out;
  if (!match_rest(g, mate, out)) return std::nullopt;
  return out;
}

DiffuseMatching diffuse_matching(const MajoranaHamiltonian& h, std::span<const int> subset,
                                 const DiffuseMatchingOptions& options) {
  const int n_maj = h.n_majoranas();
  std::vector<char> in_support(static_cast<std::size_t>(n_maj), 0);
  for (int id : subset) {
    for (ModeIndex i : h[static_cast<std::size_t>(id)].indices) {
      if (in_support[static_cast<std::size_t>(i)]) {
        throw Error(ErrorCode::kTargetsNotDisjoint, "subset terms overlap on Majorana " +
                                                        std::to_string(i));
      }
      in_support[static_cast<std::size_t>(i)] = 1;
    }
  }

  DiffuseMatching out;
  std::vector<IndexSet> pair_terms;
  if (options.best_inner_pairing) {
    for (const auto& t : h.terms()) {
      if (t.weight() == 2) pair_terms.push_back(t.indices);
    }
    std::sort(pair_terms.begin(), pair_terms.end());
  }
  const auto coincides = [&](ModeIndex a, ModeIndex b) {
    return std::binary_search(pair_terms.begin(), pair_terms.end(), IndexSet{a, b});
  };
  for (int id : subset) {
    const auto& idx = h[static_cast<std::size_t>(id)].indices;
    if (options.best_inner_pairing && idx.size() == 4) {
      const Dimer choices[3][2] = {{{idx[0], idx[1]}, {idx[2], idx[3]}},
                                   {{idx[0], idx[2]}, {idx[1], idx[3]}},
                                   {{idx[0], idx[3]}, {idx[1], idx[2]}}};
      int best = 0;
      int best_score = 3;
      for (int c = 0; c < 3; ++c) {
        const int score = (coincides(choices[c][0].first, choices[c][0].second) ? 1 : 0) +
                          (coincides(choices[c][1].first, choices[c][1].second) ? 1 : 0);
        if (score < best_score) {
          best = c;
          best_score = score;
        }
      }
      out.inner.push_back(choices[best][0]);
      out.inner.push_back(choices[best][1]);
    } else {
      for (std::size_t l = 0; l + 1 < idx.size(); l += 2) out.inner.emplace_back(idx[l], idx[l + 1]);
    }
  }

  std::vector<ModeIndex> residual;
  std::vector<int> local(static_cast<std::size_t>(n_maj), -1);
  for (ModeIndex i = 0; i < n_maj; ++i) {
    if (!in_support[static_cast<std::size_t>(i)]) {
      local[static_cast<std::size_t>(i)] = static_cast<int>(residual.size());
      residual.push_back(i);
    }
  }
  const int r = static_cast<int>(residual.size());
  out.residual_size = r;

  if (r > 0) {
    DenseGraph permitted(r);
    for (int a = 0; a < r; ++a) {
      for (int b = a + 1; b < r; ++b) permitted.set(a, b, true);
    }
    for (const auto& t : h.terms()) {
      for (std::size_t x = 0; x < t.indices.size(); ++x) {
        const int a = local[static_cast<std::size_t>(t.indices[x])];
        if (a < 0) continue;
        for (std::size_t y = x + 1; y < t.indices.size(); ++y) {
          const int b = local[static_cast<std::size_t>(t.indices[y])];
          if (b >= 0) permitted.set(a, b, false);
        }
      }
    }
    out.permitted_min_degree = permitted.min_degree();

    std::vector<Dimer> local_pairs;
    if (r == 2) {
      if (!permitted.has(0, 1)) {
        throw Error(ErrorCode::kDiracConditionUnmet,
                    "Dirac condition unmet: the two leftover Majoranas share a term");
      }
      local_pairs.emplace_back(0, 1);
    } else if (2 * out.permitted_min_degree >= r) {
      const auto cycle = hamiltonian_cycle_dense(permitted);
      for (std::size_t j = 0; j < cycle.size(); j += 2) local_pairs.emplace_back(cycle[j], cycle[j + 1]);
    } else if (r <= options.fallback_limit) {
      auto found = perfect_matching_search(permitted);
      if (!found) {
        throw Error(ErrorCode::kMatchingFailed,
                    "permitted-edge graph on " + std::to_string(r) + " Majoranas has no perfect matching");
      }
      local_pairs = std::move(*found);
      out.used_fallback = true;
    } else {
      throw Error(ErrorCode::kDiracConditionUnmet,
                  "Dirac condition unmet: " + std::to_string(r) + " leftover Majoranas, min degree " +
                      std::to_string(out.permitted_min_degree));
    }
    for (auto [a, b] : local_pairs) {
      ModeIndex x = residual[static_cast<std::size_t>(a)];
      ModeIndex y = residual[static_cast<std::size_t>(b)];
      if (x > y) std::swap(x, y);
      out.outer.emplace_back(x, y);
    }
  }

  std::vector<Dimer> all = out.inner;
  all.insert(all.end(), out.outer.begin(), out.outer.end());
  std::sort(all.begin(), all.end());
  out.matching = Matching(n_maj, std::move(all));
  return out;
}

}  // namespace fermopt
