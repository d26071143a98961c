#include <doctest.h>

#include "fermopt/experiments.hpp"

using namespace fermopt;

TEST_CASE("wilson interval") {
  const auto zero = wilson_interval(0, 10);
  CHECK(zero.estimate == 0.0);
  CHECK(zero.lo == 0.0);
  CHECK(zero.hi == doctest::Approx(0.2775).epsilon(1e-3));
  const auto half = wilson_interval(50, 100);
  CHECK(half.lo == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(half.hi == doctest::Approx(0.5962).epsilon(1e-3));
}

TEST_CASE("log-log fit and median") {
  const std::vector<double> x{1, 2, 4, 8};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -0.5));
  const auto f = loglog_fit(x, y);
  CHECK(f.slope == doctest::Approx(-0.5));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0));
  CHECK(f.lo <= f.slope);
  CHECK(f.hi >= f.slope);
  CHECK(median({3, 1, 2}) == 2.0);
  CHECK(median({4, 1, 2, 3}) == 2.5);
}

TEST_CASE("study config round trip") {
  const std::string text = R"({"study": "ratio-bench", "trials": 3, "base_seed": 7, "sizes": [20],
    "ensemble": {"family": "sparse", "q": 4, "k": 2, "weights": [2, 4]}, "pipeline": "mixed24"})";
  const auto cfg = parse_study_config(text);
  CHECK(cfg.study == Study::kRatioBench);
  CHECK(cfg.trials == 3);
  CHECK(cfg.ensemble.weights == std::vector<int>{2, 4});
  const auto again = parse_study_config(serialize_study_config(cfg));
  CHECK(serialize_study_config(again) == serialize_study_config(cfg));
  CHECK_THROWS_AS(parse_study_config(R"({"study": "nope", "base_seed": 1})"), Error);
  CHECK_THROWS_AS(parse_study_config(R"({"study": "ratio-bench"})"), Error);
}

TEST_CASE("concentration study preconditions") {
  StudyConfig cfg;
  cfg.study = Study::kSsykConcentration;
  cfg.ensemble.k = 2;
  cfg.sizes = {40};
  cfg.trials = 50;
  CHECK_THROWS_AS(run_study(cfg), Error);
  cfg.trials = 100;
  cfg.k_prime = 10;
  try {
    run_study(cfg);
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("e^2 k + 1") != std::string::npos);
  }
  cfg.k_prime = 24;
  const auto a = run_study(cfg);
  cfg.workers = 1;
  const auto b = run_study(cfg);
  CHECK(a.csv == b.csv);
  CHECK(a.metrics == b.metrics);
  CHECK(a.metrics.count("low_total_freq@40"));
  CHECK(a.metrics.count("low_total_lo@40"));
  CHECK(a.metrics.count("residual_tail_hi@40"));
}

TEST_CASE("ratio bench") {
  StudyConfig cfg;
  cfg.study = Study::kRatioBench;
  cfg.ensemble.family = Family::kSparseRandom;
  cfg.ensemble.q = 2;
  cfg.ensemble.k = 2;
  cfg.sizes = {7};
  cfg.trials = 10;
  cfg.base_seed = 3;
  const auto r = run_study(cfg);
  CHECK(r.metrics.at("min_ratio_lambda@7") > 0.0);
  CHECK(r.metrics.count("meets_ratio_lo@7"));
  const auto first_line = r.csv.substr(0, r.csv.find('\n'));
  CHECK(first_line.find("lambda_max") != std::string::npos);
  CHECK(std::count(r.csv.begin(), r.csv.end(), '\n') == 11);
}

TEST_CASE("scaling and theta sweep studies") {
  StudyConfig cfg;
  cfg.study = Study::kSykScaling;
  cfg.ensemble.q = 2;
  cfg.sizes = {3, 4};
  cfg.trials = 3;
  cfg.restarts = 2;
  const auto r = run_study(cfg);
  CHECK(r.metrics.at("median_ratio@3") == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.metrics.at("median_ratio@4") == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.metrics.count("lambda_slope"));
  REQUIRE(r.labels.size() == 1);

  StudyConfig th;
  th.study = Study::kThetaSweep;
  th.ensemble.q = 4;
  th.ensemble.n1 = 6;
  th.ensemble.n2 = 2;
  th.trials = 4;
  th.grid_points = 8;
  const auto t = run_study(th);
  CHECK(t.metrics.at("expected_slope") == doctest::Approx(-2.0 * std::sqrt(2.0)));
  CHECK(t.metrics.at("max_slope_mismatch") < 1e-9);
  CHECK(t.metrics.count("positive_lo"));
  const auto summary = serialize_report_summary(th, t);
  CHECK(summary.find("\"metrics\"") != std::string::npos);
}

TEST_CASE("parallel map keeps index order and propagates errors") {
  const auto v = parallel_map<int>(100, 4, [](int i) { return i * i; });
  for (int i = 0; i < 100; ++i) CHECK(v[static_cast<std::size_t>(i)] == i * i);
  CHECK_THROWS_AS(parallel_map<int>(10, 3, [](int i) -> int {
                    if (i == 7) throw Error(ErrorCode::kInvalidArgument, "boom");
                    return i;
                  }),
                  Error);
}
