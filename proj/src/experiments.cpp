#include "fermopt/experiments.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include "fermopt/numeric_max.hpp"
#include "fermopt/oracle.hpp"

namespace fermopt {

namespace {

std::string num(double x) {
  if (std::isnan(x)) return "";
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, "invalid study config: " + what);
}

std::vector<int> size_grid(const StudyConfig& cfg) {
  std::vector<int> sizes = cfg.sizes;
  if (sizes.empty()) sizes.push_back(cfg.ensemble.n_modes);
  for (int n : sizes) require(n >= 1, "sizes must be positive");
  return sizes;
}

std::string at(const std::string& key, int n) { return key + "@" + std::to_string(n); }

// key_freq@n, key_lo@n, key_hi@n; n < 0 drops the suffix.
void put_interval(std::map<std::string, double>& m, const std::string& key, int n, const Interval& iv) {
  const std::string suffix = n < 0 ? "" : "@" + std::to_string(n);
  m[key + "_freq" + suffix] = iv.estimate;
  m[key + "_lo" + suffix] = iv.lo;
  m[key + "_hi" + suffix] = iv.hi;
}

}  // namespace

const char* to_string(Study s) {
  switch (s) {
    case Study::kSsykConcentration: return "ssyk-concentration";
    case Study::kRatioBench: return "ratio-bench";
    case Study::kSykScaling: return "syk-scaling";
    case Study::kThetaSweep: return "theta-sweep";
  }
  return "unknown";
}

Study parse_study(const std::string& name) {
  if (name == "ssyk-concentration") return Study::kSsykConcentration;
  if (name == "ratio-bench") return Study::kRatioBench;
  if (name == "syk-scaling") return Study::kSykScaling;
  if (name == "theta-sweep") return Study::kThetaSweep;
  throw Error(ErrorCode::kInvalidArgument, "unknown study '" + name + "'");
}

StudyConfig parse_study_config(const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    StudyConfig cfg;
    cfg.study = parse_study(doc.at("study").get<std::string>());
    cfg.trials = doc.value("trials", 1);
    cfg.base_seed = doc.at("base_seed").get<std::uint64_t>();
    cfg.output = doc.value("output", std::string());
    cfg.sizes = doc.value("sizes", std::vector<int>{});
    cfg.k_prime = doc.value("k_prime", 0);
    cfg.pipeline = doc.value("pipeline", std::string("auto"));
    cfg.restarts = doc.value("restarts", 6);
    cfg.grid_points = doc.value("grid_points", 64);
    cfg.workers = doc.value("workers", 0);
    if (doc.contains("ensemble")) {
      const auto& e = doc.at("ensemble");
      auto& spec = cfg.ensemble;
      if (e.contains("family")) spec.family = parse_family(e.at("family").get<std::string>());
      spec.n_modes = e.value("n_modes", 0);
      spec.q = e.value("q", 4);
      spec.k = e.value("k", 1);
      spec.n1 = e.value("n1", 0);
      spec.n2 = e.value("n2", 0);
      spec.dist = e.value("dist", std::string("normal")) == "rademacher" ? CoeffDist::kRademacher
                                                                       : CoeffDist::kNormal;
      spec.weights = e.value("weights", std::vector<int>{});
    }
    cfg.ensemble.seed = cfg.base_seed;
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedDocument, std::string("malformed study config: ") + e.what());
  }
}

std::string serialize_study_config(const StudyConfig& cfg) {
  nlohmann::ordered_json doc;
  doc["study"] = to_string(cfg.study);
  doc["trials"] = cfg.trials;
  doc["base_seed"] = cfg.base_seed;
  doc["output"] = cfg.output;
  doc["sizes"] = cfg.sizes;
  nlohmann::ordered_json e;
  e["family"] = to_string(cfg.ensemble.family);
  e["n_modes"] = cfg.ensemble.n_modes;
  e["q"] = cfg.ensemble.q;
  e["k"] = cfg.ensemble.k;
  e["n1"] = cfg.ensemble.n1;
  e["n2"] = cfg.ensemble.n2;
  e["dist"] = cfg.ensemble.dist == CoeffDist::kNormal ? "normal" : "rademacher";
  e["weights"] = cfg.ensemble.weights;
  doc["ensemble"] = e;
  doc["k_prime"] = cfg.k_prime;
  doc["pipeline"] = cfg.pipeline;
  doc["restarts"] = cfg.restarts;
  doc["grid_points"] = cfg.grid_points;
  return doc.dump(1) + "\n";
}

Interval wilson_interval(long long successes, long long trials, double z) {
  if (trials <= 0) return {};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {p, std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

SlopeFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t m = x.size();
  if (m < 2 || y.size() != m) throw Error(ErrorCode::kInvalidArgument, "slope fit needs at least two points");
  std::vector<double> lx(m);
  std::vector<double> ly(m);
  for (std::size_t i = 0; i < m; ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(m);
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(m);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (m > 2) {
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double r = ly[i] - fit.intercept - fit.slope * lx[i];
      ss += r * r;
    }
    const double se = std::sqrt(ss / static_cast<double>(m - 2) / sxx);
    const boost::math::students_t dist(static_cast<double>(m - 2));
    const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
    fit.lo = fit.slope - t * se;
    fit.hi = fit.slope + t * se;
  } else {
    fit.lo = -std::numeric_limits<double>::infinity();
    fit.hi = std::numeric_limits<double>::infinity();
  }
  return fit;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  return m % 2 == 1 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

StudyReport run_ssyk_concentration(const StudyConfig& cfg) {
  const int k = cfg.ensemble.k;
  const int k_prime = cfg.k_prime > 0 ? cfg.k_prime : 8 * (k + 1);
  require(cfg.trials >= 100, "concentration study needs at least 100 trials");
  require(k >= 1, "k must be at least 1");
  require(k_prime >= std::exp(2.0) * k + 1.0,
          "k' = " + std::to_string(k_prime) + " violates the precondition k' >= e^2 k + 1 of the residual tail bound");
  struct Row {
    std::uint64_t seed;
    std::size_t terms;
    double total;
    double residual;
  };
  StudyReport rep;
  std::ostringstream csv;
  csv << "n,trial,seed,n_terms,sum_abs_raw,residual_abs_raw,low_total,residual_tail\n";
  for (int n : size_grid(cfg)) {
    const double scale = std::sqrt(2.0 * k * n);
    const auto rows = parallel_map<Row>(cfg.trials, cfg.workers, [&](int t) {
      const auto seed = trial_seed(cfg.base_seed, static_cast<std::uint64_t>(t));
      const auto h = gen_ssyk(n, k, seed);
      const auto tr = truncate_to_sparse(h, k_prime);
      return Row{seed, h.size(), total_strength(h) * scale, total_strength(tr.residual) * scale};
    });
    const double low_bound = k * n / 8.0;
    const double tail_bound = 4.0 * k * k / std::sqrt(k_prime - 1.0) * std::exp(-static_cast<double>(k_prime)) * n;
    long long low = 0;
    long long tail = 0;
    double terms = 0.0;
    for (std::size_t t = 0; t < rows.size(); ++t) {
      const auto& r = rows[t];
      const bool is_low = r.total < low_bound;
      const bool is_tail = r.residual > tail_bound;
      low += is_low;
      tail += is_tail;
      terms += static_cast<double>(r.terms);
      csv << n << ',' << t << ',' << r.seed << ',' << r.terms << ',' << num(r.total) << ','
          << num(r.residual) << ',' << is_low << ',' << is_tail << '\n';
    }
    put_interval(rep.metrics, "low_total", n, wilson_interval(low, cfg.trials));
    put_interval(rep.metrics, "residual_tail", n, wilson_interval(tail, cfg.trials));
    rep.metrics[at("low_total_theory", n)] = 2.0 * std::exp(-k * n / 32.0);
    rep.metrics[at("residual_threshold", n)] = tail_bound;
    rep.metrics[at("mean_terms", n)] = terms / cfg.trials;
    rep.metrics[at("expected_terms", n)] = binomial(2 * n, 4) * ssyk_probability(n, k);
  }
  rep.metrics["k_prime"] = k_prime;
  rep.labels.push_back("theory tail bounds are asymptotic; reported for comparison, not asserted");
  rep.csv = csv.str();
  return rep;
}

StudyReport run_ratio_bench(const StudyConfig& cfg) {
  require(cfg.trials >= 1, "trials must be at least 1");
  struct Row {
    std::uint64_t seed;
    RatioCertificate cert;
    double lambda;
  };
  StudyReport rep;
  std::ostringstream csv;
  csv << "n,trial,seed,pipeline,achieved,upper_bound,ratio,guaranteed_ratio,guarantee_holds,lambda_max,ratio_lambda\n";
  for (int n : size_grid(cfg)) {
    const auto rows = parallel_map<Row>(cfg.trials, cfg.workers, [&](int t) {
      EnsembleSpec spec = cfg.ensemble;
      spec.n_modes = n;
      spec.seed = trial_seed(cfg.base_seed, static_cast<std::uint64_t>(t));
      const auto h = generate(spec);
      RatioCertificate cert;
      if (cfg.pipeline == "ssyk") {
        cert = optimize_ssyk(h, spec.k).result.certificate;
      } else if (cfg.pipeline == "strictq") {
        cert = optimize_strict_q(h).certificate;
      } else if (cfg.pipeline == "mixed24") {
        cert = optimize_mixed_24(h).certificate;
      } else {
        cert = optimize_auto(h).certificate;
      }
      const double lambda = h.n_modes() <= 8 ? lambda_max_exact(h) : std::nan("");
      return Row{spec.seed, cert, lambda};
    });
    std::vector<double> ratios;
    std::vector<double> guaranteed;
    std::vector<double> lambda_ratios;
    long long meets = 0;
    for (std::size_t t = 0; t < rows.size(); ++t) {
      const auto& r = rows[t];
      const double ratio = r.cert.upper_bound > 0 ? r.cert.achieved / r.cert.upper_bound : std::nan("");
      const double lr = std::isnan(r.lambda) ? std::nan("") : r.cert.achieved / r.lambda;
      ratios.push_back(ratio);
      if (r.cert.guarantee_holds) guaranteed.push_back(ratio);
      if (!std::isnan(lr)) lambda_ratios.push_back(lr);
      meets += ratio >= r.cert.guaranteed_ratio;
      csv << n << ',' << t << ',' << r.seed << ',' << to_string(r.cert.pipeline) << ',' << num(r.cert.achieved)
          << ',' << num(r.cert.upper_bound) << ',' << num(ratio) << ',' << num(r.cert.guaranteed_ratio) << ','
          << r.cert.guarantee_holds << ',' << num(r.lambda) << ',' << num(lr) << '\n';
    }
    rep.metrics[at("min_ratio", n)] = *std::min_element(ratios.begin(), ratios.end());
    rep.metrics[at("median_ratio", n)] = median(ratios);
    rep.metrics[at("guaranteed_rows", n)] = static_cast<double>(guaranteed.size());
    if (!guaranteed.empty()) {
      rep.metrics[at("min_ratio_guaranteed", n)] = *std::min_element(guaranteed.begin(), guaranteed.end());
    }
    if (!lambda_ratios.empty()) {
      rep.metrics[at("min_ratio_lambda", n)] = *std::min_element(lambda_ratios.begin(), lambda_ratios.end());
      rep.metrics[at("median_ratio_lambda", n)] = median(lambda_ratios);
    }
    put_interval(rep.metrics, "meets_ratio", n, wilson_interval(meets, cfg.trials));
  }
  rep.csv = csv.str();
  return rep;
}

StudyReport run_syk_scaling(const StudyConfig& cfg) {
  require(cfg.trials >= 1, "trials must be at least 1");
  const int q = cfg.ensemble.q;
  struct Row {
    std::uint64_t seed;
    double value;
    double lambda;
    bool converged;
  };
  StudyReport rep;
  std::ostringstream csv;
  csv << "n,trial,seed,gaussian_value,lambda_max,ratio,converged\n";
  std::vector<double> ns;
  std::vector<double> med_ratio;
  std::vector<double> med_lambda;
  for (int n : size_grid(cfg)) {
    require(n <= kIterativeModes, "size beyond the eigensolver budget");
    const auto rows = parallel_map<Row>(cfg.trials, cfg.workers, [&](int t) {
      const auto seed = trial_seed(cfg.base_seed, static_cast<std::uint64_t>(t));
      const auto h = gen_syk_q(n, q, seed);
      NumericMaxOptions opt;
      opt.restarts = cfg.restarts;
      opt.seed = seed;
      const auto res = gaussian_numeric_max(h, opt);
      return Row{seed, res.value, lambda_max_exact(h), res.converged};
    });
    std::vector<double> ratios;
    std::vector<double> lambdas;
    for (std::size_t t = 0; t < rows.size(); ++t) {
      const auto& r = rows[t];
      ratios.push_back(r.value / r.lambda);
      lambdas.push_back(r.lambda);
      csv << n << ',' << t << ',' << r.seed << ',' << num(r.value) << ',' << num(r.lambda) << ','
          << num(r.value / r.lambda) << ',' << r.converged << '\n';
    }
    ns.push_back(n);
    med_ratio.push_back(median(ratios));
    med_lambda.push_back(median(lambdas));
    rep.metrics[at("median_ratio", n)] = med_ratio.back();
    rep.metrics[at("min_ratio", n)] = *std::min_element(ratios.begin(), ratios.end());
    rep.metrics[at("median_lambda", n)] = med_lambda.back();
  }
  bool monotone = true;
  for (std::size_t i = 1; i < med_ratio.size(); ++i) monotone = monotone && med_ratio[i] <= med_ratio[i - 1];
  rep.metrics["median_ratio_nonincreasing"] = monotone ? 1.0 : 0.0;
  if (ns.size() >= 2) {
    const auto fr = loglog_fit(ns, med_ratio);
    const auto fl = loglog_fit(ns, med_lambda);
    rep.metrics["ratio_slope"] = fr.slope;
    rep.metrics["ratio_slope_lo"] = fr.lo;
    rep.metrics["ratio_slope_hi"] = fr.hi;
    rep.metrics["lambda_slope"] = fl.slope;
    rep.metrics["lambda_slope_lo"] = fl.lo;
    rep.metrics["lambda_slope_hi"] = fl.hi;
  }
  rep.labels.push_back("qualitative: asymptotic claim not reproducible at desk scale");
  rep.csv = csv.str();
  return rep;
}

StudyReport run_theta_sweep(const StudyConfig& cfg) {
  require(cfg.trials >= 1, "trials must be at least 1");
  const int q = cfg.ensemble.q;
  const int n1 = cfg.ensemble.n1;
  const int n2 = cfg.ensemble.n2;
  const auto grid = default_theta_grid(q, cfg.grid_points);
  struct Row {
    std::uint64_t seed;
    ThetaCurve curve;
  };
  const auto rows = parallel_map<Row>(cfg.trials, cfg.workers, [&](int t) {
    const auto seed = trial_seed(cfg.base_seed, static_cast<std::uint64_t>(t));
    return Row{seed, rho_theta_sweep(gen_two_colored(n1, n2, q, seed), grid)};
  });
  StudyReport rep;
  std::ostringstream csv;
  csv << "trial,seed,slope,slope_closed_form,best_theta,best_energy,positive\n";
  long long positive = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  double mismatch = 0.0;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    const auto& c = rows[t].curve;
    const bool pos = c.best_energy > 0.0;
    positive += pos;
    sum += c.slope;
    sum_sq += c.slope * c.slope;
    mismatch = std::max(mismatch, std::abs(c.slope - c.slope_closed_form));
    csv << t << ',' << rows[t].seed << ',' << num(c.slope) << ',' << num(c.slope_closed_form) << ','
        << num(c.best_theta) << ',' << num(c.best_energy) << ',' << pos << '\n';
  }
  const double m = static_cast<double>(cfg.trials);
  const double mean = sum / m;
  const double expected = 2.0 * std::sqrt(static_cast<double>(n2)) * first_order_sign(q);
  put_interval(rep.metrics, "positive", -1, wilson_interval(positive, cfg.trials));
  rep.metrics["mean_slope"] = mean;
  rep.metrics["mean_slope_se"] = cfg.trials > 1 ? std::sqrt(std::max(0.0, sum_sq / m - mean * mean) / (m - 1.0)) : 0.0;
  rep.metrics["expected_slope"] = expected;
  rep.metrics["slope_rel_error"] = std::abs(mean - expected) / std::abs(expected);
  rep.metrics["max_slope_mismatch"] = mismatch;
  rep.csv = csv.str();
  return rep;
}

StudyReport run_study(const StudyConfig& cfg) {
  switch (cfg.study) {
    case Study::kSsykConcentration: return run_ssyk_concentration(cfg);
    case Study::kRatioBench: return run_ratio_bench(cfg);
    case Study::kSykScaling: return run_syk_scaling(cfg);
    case Study::kThetaSweep: return run_theta_sweep(cfg);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown study");
}

std::string serialize_report_summary(const StudyConfig& cfg, const StudyReport& report) {
  nlohmann::ordered_json doc;
  doc["config"] = nlohmann::ordered_json::parse(serialize_study_config(cfg));
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.metrics) metrics[k] = v;
  doc["metrics"] = metrics;
  doc["labels"] = report.labels;
  return doc.dump(1) + "\n";
}

}  // namespace fermopt
