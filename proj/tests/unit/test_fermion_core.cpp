#include <doctest.h>

#include "fermopt/fermion_core.hpp"
#include "helpers.hpp"

using namespace fermopt;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("canonical_sign examples") {
  auto [a, sa] = canonical_sign(std::vector<int>{0, 1, 2, 3});
  CHECK(a == IndexSet{0, 1, 2, 3});
  CHECK(sa == 1);
  auto [b, sb] = canonical_sign(std::vector<int>{1, 0});
  CHECK(b == IndexSet{0, 1});
  CHECK(sb == -1);
  auto [c, sc] = canonical_sign(std::vector<int>{2, 0, 3, 1});
  CHECK(c == IndexSet{0, 1, 2, 3});
  CHECK(sc == -1);
  CHECK(code_of([] { canonical_sign(std::vector<int>{3, 1, 3}); }) == ErrorCode::kRepeatedMajorana);
}

TEST_CASE("canonical_sign composes and agrees with inversion counting") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 8);
    std::vector<int> pi(m), sigma(m), comp(m);
    std::iota(pi.begin(), pi.end(), 0);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::shuffle(pi.begin(), pi.end(), rng);
    std::shuffle(sigma.begin(), sigma.end(), rng);
    for (int i = 0; i < m; ++i) comp[i] = pi[sigma[i]];
    const int s_pi = canonical_sign(pi).second;
    const int s_sigma = canonical_sign(sigma).second;
    CHECK(s_pi == testing::inversion_parity(pi));
    CHECK(canonical_sign(comp).second == s_pi * s_sigma);
    CHECK(permutation_parity(comp) == testing::inversion_parity(comp));
  }
}

TEST_CASE("sparsity profile") {
  const MajoranaHamiltonian h(4, {{{0, 1, 2, 3}, 1.0}, {{3, 4, 5, 6}, -1.0}});
  const auto p = sparsity_profile(h);
  CHECK(p.degree[3] == 2);
  CHECK(p.max_degree == 2);
  CHECK(p.weights_present == std::set<int>{4});

  const MajoranaHamiltonian empty(3, {});
  const auto pe = sparsity_profile(empty);
  CHECK(pe.max_degree == 0);
  CHECK(pe.weights_present.empty());
}

TEST_CASE("degree sums equal the total weight") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto h = testing::random_hamiltonian(rng, 2 + static_cast<int>(rng() % 8), 12, {2, 4, 6});
    const auto p = sparsity_profile(h);
    long long weight = 0;
    for (const auto& t : h.terms()) weight += t.weight();
    CHECK(std::accumulate(p.degree.begin(), p.degree.end(), 0LL) == weight);
    CHECK(p.degree == testing::recount_degrees(h));
  }
}

TEST_CASE("total strength") {
  CHECK(total_strength(MajoranaHamiltonian(2, {{{0, 1}, 2.0}, {{0, 1, 2, 3}, -3.0}})) == 5.0);
  CHECK(total_strength(MajoranaHamiltonian(2, {})) == 0.0);
}

TEST_CASE("term validation") {
  CHECK(code_of([] { MajoranaHamiltonian(2, {{{0, 0, 1, 2}, 1.0}}); }) == ErrorCode::kRepeatedMajorana);
  CHECK(code_of([] { MajoranaHamiltonian(2, {{{0, 1, 2}, 1.0}}); }) == ErrorCode::kOddWeight);
  CHECK(code_of([] { MajoranaHamiltonian(2, {{{1, 0}, 1.0}}); }) == ErrorCode::kNotIncreasing);
  CHECK(code_of([] { MajoranaHamiltonian(2, {{{0, 4}, 1.0}}); }) == ErrorCode::kIndexOutOfRange);
  CHECK(code_of([] { MajoranaHamiltonian(2, {{{0, 1}, 1.0}, {{0, 1}, 2.0}}); }) == ErrorCode::kDuplicateTerm);
  CHECK(code_of([] { MajoranaHamiltonian(2, {{{}, 1.0}}); }) == ErrorCode::kOddWeight);
}

TEST_CASE("hamiltonian json") {
  const auto h = parse_hamiltonian(R"({"n_modes":2,"terms":[{"indices":[0,1,2,3],"coeff":1.0}]})");
  REQUIRE(h.size() == 1);
  CHECK(h.n_modes() == 2);
  CHECK(h[0].indices == IndexSet{0, 1, 2, 3});
  CHECK(h[0].coeff == 1.0);

  CHECK(code_of([] { parse_hamiltonian(R"({"n_modes":2,"terms":[{"indices":[0,0,1,2],"coeff":1}]})"); }) ==
        ErrorCode::kRepeatedMajorana);
  CHECK(code_of([] { parse_hamiltonian("{not json"); }) == ErrorCode::kMalformedDocument);
  CHECK(code_of([] { parse_hamiltonian(R"({"terms":[]})"); }) == ErrorCode::kMalformedDocument);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto r = testing::random_hamiltonian(rng, 6, 10);
    const auto text = serialize_hamiltonian(r);
    CHECK(parse_hamiltonian(text) == r);
    CHECK(serialize_hamiltonian(parse_hamiltonian(text)) == text);
  }
}

TEST_CASE("support and subset") {
  const MajoranaHamiltonian h(4, {{{0, 1}, 1.0}, {{2, 3, 6, 7}, 1.0}, {{1, 2}, 1.0}});
  const std::vector<int> ids{0, 2};
  CHECK(support(h, ids) == IndexSet{0, 1, 2});
  const auto sub = h.subset(ids);
  CHECK(sub.size() == 2);
  CHECK(sub[1].indices == IndexSet{1, 2});
  CHECK(intersects(h[0].indices, h[2].indices));
  CHECK_FALSE(intersects(h[0].indices, h[1].indices));
}
