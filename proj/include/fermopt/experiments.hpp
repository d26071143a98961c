#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <map>
#include <string>
#include <vector>

#include "fermopt/ensembles.hpp"
#include "fermopt/optimizer.hpp"

namespace fermopt {

enum class Study { kSsykConcentration, kRatioBench, kSykScaling, kThetaSweep };

const char* to_string(Study s);
Study parse_study(const std::string& name);  // ssyk-concentration | ratio-bench | syk-scaling | theta-sweep

struct StudyConfig {
  Study study = Study::kRatioBench;
  EnsembleSpec ensemble;     // template; n_modes is overridden by `sizes`
  int trials = 1;
  std::vector<int> sizes;    // n_modes grid
  std::uint64_t base_seed = 0;
  std::string output;        // CSV path; the JSON sidecar goes to output + ".json"
  int k_prime = 0;           // concentration: 0 means 8(k+1)
  std::string pipeline = "auto";  // ratio bench: auto | strictq | mixed24 | ssyk
  int restarts = 6;          // scaling: numeric maximizer restarts
  int grid_points = 64;      // theta sweep
  int workers = 0;           // 0 = hardware concurrency
};

StudyConfig parse_study_config(const std::string& text);
std::string serialize_study_config(const StudyConfig& cfg);

struct Interval {
  double estimate = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

/// 95% Wilson score interval for `successes` out of `trials`.
Interval wilson_interval(long long successes, long long trials, double z = 1.959963984540054);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double lo = 0.0;   // 95% t interval
  double hi = 0.0;
};

/// Ordinary least squares of log y on log x.
SlopeFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

double median(std::vector<double> v);

struct StudyReport {
  std::string csv;
  std::map<std::string, double> metrics;
  std::vector<std::string> labels;
};

/// Per-trial seed base_seed ^ trial.
inline std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial) { return base ^ trial; }

/// Runs fn(i) for i in [0, count) on a worker pool and returns results by index.
template <class T>
std::vector<T> parallel_map(int count, int workers, const std::function<T(int)>& fn) {
  std::vector<T> out(static_cast<std::size_t>(count));
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::max(1, std::min(workers, count));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto body = [&] {
    for (int i; (i = next.fetch_add(1)) < count;) {
      try {
        out[static_cast<std::size_t>(i)] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

StudyReport run_ssyk_concentration(const StudyConfig& cfg);
StudyReport run_ratio_bench(const StudyConfig& cfg);
StudyReport run_syk_scaling(const StudyConfig& cfg);
StudyReport run_theta_sweep(const StudyConfig& cfg);
StudyReport run_study(const StudyConfig& cfg);

/// JSON sidecar: config echo, metrics and labels.
std::string serialize_report_summary(const StudyConfig& cfg, const StudyReport& report);

}  // namespace fermopt
