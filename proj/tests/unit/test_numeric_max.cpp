#include <doctest.h>

#include "fermopt/ensembles.hpp"
#include "fermopt/numeric_max.hpp"
#include "fermopt/oracle.hpp"
#include "helpers.hpp"

using namespace fermopt;

TEST_CASE("energy matches the pfaffian route") {
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const auto h = testing::random_hamiltonian(rng, n, 10, {2, 4, 6});
    const CorrelationMatrix g(testing::random_pure_gamma(rng, 2 * n));
    CHECK(energy(g.gamma(), h) == doctest::Approx(hamiltonian_expectation(g, h)).epsilon(1e-10));
  }
}

TEST_CASE("gradient against central differences") {
  std::mt19937_64 rng(21);
  const double eps = 1e-6;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const auto h = testing::random_hamiltonian(rng, n, 10, {2, 4, 6});
    const Eigen::MatrixXd g = testing::random_antisymmetric(rng, 2 * n);
    const auto grad = energy_gradient(g, h);
    for (int a = 0; a < 2 * n; ++a) {
      for (int b = a + 1; b < 2 * n; ++b) {
        Eigen::MatrixXd up = g, dn = g;
        up(a, b) += eps;
        up(b, a) -= eps;
        dn(a, b) -= eps;
        dn(b, a) += eps;
        const double fd = (energy(up, h) - energy(dn, h)) / (2 * eps);
        CHECK(grad(a, b) == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
        CHECK(grad(b, a) == doctest::Approx(-grad(a, b)));
      }
    }
  }
}

TEST_CASE("pfaffian derivative identity") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd a = testing::random_antisymmetric(rng, 6);
    const MajoranaHamiltonian h(3, {{{0, 1, 2, 3, 4, 5}, 1.0}});
    const auto grad = energy_gradient(a, h);
    const double pf = pfaffian(a);
    const Eigen::MatrixXd inv = a.inverse();
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j) {
        // d Pf = (1/2) Pf tr(A^-1 dA) with dA = E_ij - E_ji
        CHECK(grad(i, j) == doctest::Approx(0.5 * pf * (inv(j, i) - inv(i, j))).epsilon(1e-8));
      }
  }
}

TEST_CASE("quadratic hamiltonians reach the exact gaussian optimum") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const auto h = testing::random_hamiltonian(rng, n, 3 * n, {2});
    // canonical form oracle: half the sum of singular values of the coefficient matrix
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (const auto& t : h.terms()) {
      a(t.indices[0], t.indices[1]) = t.coeff;
      a(t.indices[1], t.indices[0]) = -t.coeff;
    }
    const double exact = 0.5 * Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues().sum();
    CHECK(quadratic_gaussian_max(h) == doctest::Approx(exact).epsilon(1e-10));
    NumericMaxOptions opt;
    opt.seed = static_cast<std::uint64_t>(trial);
    const auto r = gaussian_numeric_max(h, opt);
    CHECK(r.value == doctest::Approx(exact).epsilon(1e-6));
    CHECK(r.value == doctest::Approx(lambda_max_exact(h)).epsilon(1e-6));
    CHECK(r.gamma.is_pure(1e-8));
  }
}

TEST_CASE("single quartic term") {
  const MajoranaHamiltonian h(3, {{{0, 2, 3, 5}, 1.0}});
  const auto r = gaussian_numeric_max(h);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("numeric max bounds") {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 3);
    const auto h = gen_syk_q(n, 4, static_cast<std::uint64_t>(trial));
    const auto seed_state = testing::random_matching_state(rng, 2 * n);
    const double seed_value = matching_state_expectation(seed_state, h);
    NumericMaxOptions opt;
    opt.restarts = 3;
    opt.seed = static_cast<std::uint64_t>(trial);
    opt.seeds.push_back(correlation_from_matching(seed_state));
    const auto r = gaussian_numeric_max(h, opt);
    CHECK(r.value <= lambda_max_exact(h) + 1e-8);
    CHECK(r.value >= seed_value - 1e-12);
    CHECK(hamiltonian_expectation(r.gamma, h) == doctest::Approx(r.value).epsilon(1e-9));
  }
  const auto h = gen_syk_q(4, 4, 1);
  NumericMaxOptions opt;
  opt.seed = 3;
  CHECK(gaussian_numeric_max(h, opt).value == gaussian_numeric_max(h, opt).value);
}
