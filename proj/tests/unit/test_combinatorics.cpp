#include <doctest.h>

#include "fermopt/combinatorics.hpp"
#include "fermopt/ensembles.hpp"
#include "helpers.hpp"

using namespace fermopt;

namespace {

// Independent diffuse check straight from the three conditions.
bool diffuse_oracle(const MajoranaHamiltonian& h, const std::vector<int>& ids) {
  std::set<int> sup;
  int q = 0;
  for (const auto& t : h.terms()) q = std::max(q, t.weight());
  for (std::size_t x = 0; x < ids.size(); ++x) {
    for (std::size_t y = x + 1; y < ids.size(); ++y) {
      const auto& a = h[ids[x]].indices;
      const auto& b = h[ids[y]].indices;
      if (intersects(a, b)) return false;
      for (const auto& t : h.terms())
        if (intersects(t.indices, a) && intersects(t.indices, b)) return false;
    }
    sup.insert(h[ids[x]].indices.begin(), h[ids[x]].indices.end());
  }
  return static_cast<long long>(sup.size()) * (q + 1) < 2LL * q * h.n_modes();
}

bool has_hamiltonian_cycle_brute(const DenseGraph& g) {
  const int n = g.size();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) ok = g.has(perm[i], perm[(i + 1) % n]);
    if (ok) return true;
  } while (std::next_permutation(perm.begin() + 1, perm.end()));
  return false;
}

DenseGraph random_graph(std::mt19937_64& rng, int n, double p) {
  DenseGraph g(n);
  std::bernoulli_distribution coin(p);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (coin(rng)) g.set(a, b, true);
  return g;
}

}  // namespace

TEST_CASE("conflict degree bound") {
  CHECK(conflict_degree_bound(4, 2) == 16);
  CHECK(conflict_degree_bound(2, 2) == 4);
  CHECK(conflict_degree_bound(4, 1) == 0);
}

TEST_CASE("is_diffuse examples") {
  const MajoranaHamiltonian h(10, {{{0, 1, 2, 3}, 1.0}, {{3, 4, 5, 6}, 1.0}, {{8, 9, 10, 11}, 1.0}, {{3, 7, 8, 12}, 1.0}});
  CHECK(is_diffuse(h, std::vector<int>{0}).diffuse);
  const auto c1 = is_diffuse(h, std::vector<int>{0, 1});
  CHECK_FALSE(c1.diffuse);
  CHECK(c1.violated_condition == 1);
  const auto c2 = is_diffuse(h, std::vector<int>{0, 2});
  CHECK_FALSE(c2.diffuse);
  CHECK(c2.violated_condition == 2);

  const MajoranaHamiltonian small(2, {{{0, 1, 2, 3}, 1.0}});
  const auto c3 = is_diffuse(small, std::vector<int>{0});
  CHECK_FALSE(c3.diffuse);
  CHECK(c3.violated_condition == 3);
}

TEST_CASE("conflict graph and coloring") {
  const MajoranaHamiltonian disjoint(8, {{{0, 1, 2, 3}, 1.0}, {{4, 5, 6, 7}, 1.0}});
  CHECK(build_conflict_graph(disjoint).max_degree() == 0);
  const MajoranaHamiltonian shared(8, {{{0, 1, 2, 3}, 1.0}, {{3, 4, 5, 6}, 1.0}});
  CHECK(build_conflict_graph(shared).adjacent(0, 1));

  ConflictGraph edgeless{{{}, {}, {}}};
  const std::vector<int> o3{0, 1, 2};
  const auto c0 = greedy_color(edgeless, o3);
  CHECK(*std::max_element(c0.begin(), c0.end()) == 0);
  ConflictGraph path{{{1}, {0, 2}, {1}}};
  const std::vector<int> po{1, 0, 2};
  const auto cp = greedy_color(path, po);
  CHECK(*std::max_element(cp.begin(), cp.end()) == 1);
  ConflictGraph k5;
  for (int a = 0; a < 5; ++a) {
    k5.adjacency.emplace_back();
    for (int b = 0; b < 5; ++b)
      if (a != b) k5.adjacency.back().push_back(b);
  }
  const std::vector<int> o5{0, 1, 2, 3, 4};
  const auto c5 = greedy_color(k5, o5);
  CHECK(*std::max_element(c5.begin(), c5.end()) == 4);
}

TEST_CASE("conflict graph degree stays below the bound") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int q = seed % 2 ? 4 : 2;
    const int k = 1 + static_cast<int>(seed % 3);
    const auto h = gen_sparse_random(20, q, k, CoeffDist::kNormal, seed);
    const auto g = build_conflict_graph(h);
    CHECK(g.max_degree() <= conflict_degree_bound(q, k));
    for (std::size_t a = 0; a < g.size(); ++a) {
      for (std::size_t b = 0; b < g.size(); ++b) {
        if (a == b) continue;
        const auto& ia = h[a].indices;
        const auto& ib = h[b].indices;
        bool expect = intersects(ia, ib);
        for (const auto& t : h.terms()) expect = expect || (intersects(t.indices, ia) && intersects(t.indices, ib));
        CHECK(g.adjacent(static_cast<int>(a), static_cast<int>(b)) == expect);
      }
    }
    const auto order = coloring_order(g, h);
    const auto colors = greedy_color(g, order);
    for (std::size_t a = 0; a < g.size(); ++a)
      for (int b : g.adjacency[a]) CHECK(colors[a] != colors[static_cast<std::size_t>(b)]);
  }
}

TEST_CASE("diffuse partition properties") {
  SUBCASE("single term") {
    const MajoranaHamiltonian h(20, {{{0, 1, 2, 3}, 1.0}});
    const auto p = diffuse_partition(h);
    REQUIRE(p.parts.size() == 1);
    CHECK(p.parts.begin()->second == std::vector<int>{0});
  }
  SUBCASE("q = 4, k = 2 gives Q = 18") {
    const auto h = gen_sparse_random(20, 4, 2, CoeffDist::kNormal, 1);
    const auto p = diffuse_partition(h);
    CHECK(p.Q == 18);
    for (const auto& [key, ids] : p.parts) CHECK(key.alpha < p.Q);
  }
  SUBCASE("seeded random instances") {
    int all_diffuse = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
      const int k = 1 + static_cast<int>(seed % 2);
      const std::vector<int> weights = seed % 3 == 0 ? std::vector<int>{2, 4} : std::vector<int>{4};
      const int n = 24 + static_cast<int>(seed % 5) * 4;
      const auto h = gen_sparse_random(n, 4, k, CoeffDist::kNormal, seed, weights);
      const auto p = diffuse_partition(h);
      std::vector<int> seen(h.size(), 0);
      std::map<int, int> per_weight;
      for (const auto& [key, ids] : p.parts) {
        CHECK_FALSE(ids.empty());
        ++per_weight[key.half_weight];
        for (int id : ids) {
          ++seen[static_cast<std::size_t>(id)];
          CHECK(h[static_cast<std::size_t>(id)].weight() == 2 * key.half_weight);
        }
        CHECK(std::is_sorted(ids.begin(), ids.end()));
        if (p.all_diffuse) CHECK(diffuse_oracle(h, ids));
        CHECK(diffuse_oracle(h, ids) == is_diffuse(h, ids).diffuse);
      }
      for (int s : seen) CHECK(s == 1);
      for (const auto& [w, count] : per_weight) CHECK(count <= p.Q);
      all_diffuse += p.all_diffuse;
    }
    CHECK(all_diffuse == 500);
  }
}

TEST_CASE("hamiltonian cycle") {
  DenseGraph k4(4);
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) k4.set(a, b, true);
  const auto c4 = hamiltonian_cycle_dense(k4);
  CHECK(c4.size() == 4);
  CHECK(is_hamiltonian_cycle(k4, c4));

  DenseGraph c6(6);
  for (int i = 0; i < 6; ++i) c6.set(i, (i + 1) % 6, true);
  for (int i = 0; i < 6; ++i) c6.set(i, (i + 2) % 6, true);
  CHECK(c6.min_degree() == 4);
  CHECK(has_hamiltonian_cycle_brute(c6));
  CHECK(is_hamiltonian_cycle(c6, hamiltonian_cycle_dense(c6)));

  DenseGraph sparse(6);
  for (int i = 0; i < 6; ++i) sparse.set(i, (i + 1) % 6, true);
  CHECK_THROWS_AS(hamiltonian_cycle_dense(sparse), Error);

  std::mt19937_64 rng(13);
  int tested = 0;
  for (int trial = 0; trial < 2000 && tested < 200; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 8);
    const auto g = random_graph(rng, n, 0.7);
    if (2 * g.min_degree() < n) continue;
    ++tested;
    REQUIRE(has_hamiltonian_cycle_brute(g));
    const auto cyc = hamiltonian_cycle_dense(g);
    CHECK(is_hamiltonian_cycle(g, cyc));
    CHECK(hamiltonian_cycle_dense(g) == cyc);
  }
  CHECK(tested >= 100);
}

TEST_CASE("perfect matching search") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 * (1 + static_cast<int>(rng() % 5));
    const auto g = random_graph(rng, n, 0.4);
    const auto m = perfect_matching_search(g);
    // brute force existence
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    bool exists = false;
    do {
      bool ok = true;
      for (int i = 0; i < n && ok; i += 2) ok = g.has(perm[i], perm[i + 1]);
      exists = exists || ok;
    } while (!exists && std::next_permutation(perm.begin(), perm.end()));
    CHECK(m.has_value() == exists);
    if (m) {
      std::vector<int> cover(n, 0);
      for (const auto& [a, b] : *m) {
        CHECK(g.has(a, b));
        ++cover[a];
        ++cover[b];
      }
      for (int c : cover) CHECK(c == 1);
    }
  }
}

TEST_CASE("diffuse matching") {
  SUBCASE("consecutive inner pairs") {
    const MajoranaHamiltonian h(10, {{{0, 1, 2, 3}, 1.0}});
    const auto dm = diffuse_matching(h, std::vector<int>{0});
    CHECK(dm.inner == std::vector<Dimer>{{0, 1}, {2, 3}});
    CHECK(classify_consistency(dm.matching, h[0].indices).consistent);
  }
  SUBCASE("two leftover Majoranas") {
    const MajoranaHamiltonian ok(2, {{{0, 1}, 1.0}});
    const auto dm = diffuse_matching(ok, std::vector<int>{0});
    CHECK(dm.outer == std::vector<Dimer>{{2, 3}});
    const MajoranaHamiltonian blocked(2, {{{0, 1}, 1.0}, {{2, 3}, 1.0}});
    CHECK_THROWS_AS(diffuse_matching(blocked, std::vector<int>{0}), Error);
  }
  SUBCASE("seeded instances satisfy the consistency contract") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
      const int q = seed % 2 ? 4 : 2;
      const auto h = gen_sparse_random(20 + static_cast<int>(seed % 4) * 5, q, 2, CoeffDist::kNormal, seed);
      const auto p = diffuse_partition(h);
      if (!p.all_diffuse) continue;
      const auto& [key, ids] = *p.parts.begin();
      DiffuseMatching dm;
      try {
        dm = diffuse_matching(h, ids);
      } catch (const Error&) {
        continue;
      }
      ++checked;
      CHECK(dm.matching.n_majoranas() == h.n_majoranas());
      std::set<int> in(ids.begin(), ids.end());
      for (std::size_t t = 0; t < h.size(); ++t) {
        const bool consistent = classify_consistency(dm.matching, h[t].indices).consistent;
        if (in.count(static_cast<int>(t))) {
          CHECK(consistent);
        } else if (h[t].weight() >= 2 * key.half_weight) {
          CHECK_FALSE(consistent);
        }
      }
    }
    CHECK(checked >= 450);
  }
}

TEST_CASE("partition serialization") {
  const MajoranaHamiltonian h(20, {{{0, 1, 2, 3}, 1.0}, {{4, 5}, 2.0}});
  const auto text = serialize_partition(diffuse_partition(h));
  CHECK(text.find("\"parts\"") != std::string::npos);
  CHECK(text.find("(1,0)") != std::string::npos);
  CHECK(text.find("(2,0)") != std::string::npos);
}
