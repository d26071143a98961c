#include "fermopt/cli.hpp"

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fermopt/ensembles.hpp"
#include "fermopt/experiments.hpp"
#include "fermopt/gaussian.hpp"
#include "fermopt/optimizer.hpp"
#include "fermopt/oracle.hpp"
#include "fermopt/state_io.hpp"

namespace fermopt {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw Error(ErrorCode::kInvalidArgument, "bad number '" + s + "' in grid");
  return v;
}

struct GenArgs {
  std::string family;
  int n = 0;
  int q = 4;
  int k = 1;
  int n1 = 0;
  int n2 = 0;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int run_gen(const GenArgs& a, std::ostream& out) {
  if (!a.seed) throw Error(ErrorCode::kInvalidArgument, "gen requires --seed");
  EnsembleSpec spec;
  spec.family = parse_family(a.family);
  spec.n_modes = a.n;
  spec.q = a.q;
  spec.k = a.k;
  spec.n1 = a.n1;
  spec.n2 = a.n2;
  spec.seed = *a.seed;
  if (spec.family == Family::kTwoColored && spec.n_modes == 0) spec.n_modes = (spec.n1 + spec.n2) / 2;
  const auto h = generate(spec);
  write_text_file(a.out, serialize_hamiltonian(h));
  write_text_file(a.out + ".spec.json", serialize_spec(spec));
  out << "wrote " << h.size() << " terms on " << h.n_modes() << " modes to " << a.out << "\n";
  return kExitOk;
}

struct OptimizeArgs {
  std::string in;
  std::string pipeline = "auto";
  int k = 0;
  std::string out_state;
  std::string out_cert;
};

int run_optimize(const OptimizeArgs& a, std::ostream& out) {
  const auto h = load_hamiltonian(a.in);
  PipelineResult res;
  if (a.pipeline == "auto") {
    res = optimize_auto(h);
  } else {
    switch (parse_pipeline(a.pipeline)) {
      case Pipeline::kStrictQ: res = optimize_strict_q(h); break;
      case Pipeline::kMixed24: res = optimize_mixed_24(h); break;
      case Pipeline::kSsyk:
        if (a.k < 1) throw Error(ErrorCode::kInvalidArgument, "the ssyk pipeline requires --k >= 1");
        res = optimize_ssyk(h, a.k).result;
        break;
    }
  }
  const auto cert = serialize_certificate(res.certificate);
  if (!a.out_state.empty()) write_text_file(a.out_state, serialize_state(res.state));
  if (!a.out_cert.empty()) {
    write_text_file(a.out_cert, cert);
  } else {
    out << cert;
  }
  return res.certificate.guarantee_holds ? kExitOk : kExitNoGuarantee;
}

int run_verify(const std::string& in, const std::string& state_path, std::ostream& out) {
  const auto h = load_hamiltonian(in);
  const auto doc = parse_state(read_text_file(state_path));
  if (doc.gamma.gamma().rows() != h.n_majoranas()) {
    throw Error(ErrorCode::kInvalidArgument, "state and Hamiltonian disagree on the number of modes");
  }
  const double pf = hamiltonian_expectation(doc.gamma, h);
  const double scale = std::max(1.0, total_strength(h));
  bool agree = true;
  nlohmann::ordered_json report;
  report["pfaffian"] = pf;
  if (doc.matching) {
    const double closed = matching_state_expectation(*doc.matching, h);
    report["closed_form"] = closed;
    agree = agree && std::abs(closed - pf) <= 1e-9 * scale;
  }
  if (h.n_modes() <= kDenseEigenModes) {
    const auto rho = doc.matching ? dense_state_from_matching(*doc.matching) : dense_state_from_correlation(doc.gamma);
    const double dense = dense_expectation(rho, h);
    report["dense"] = dense;
    agree = agree && std::abs(dense - pf) <= 1e-9 * scale;
  }
  report["agree"] = agree;
  out << report.dump(1) << "\n";
  return agree ? kExitOk : kExitError;
}

int run_exact(const std::string& in, const std::string& method, std::ostream& out) {
  const auto h = load_hamiltonian(in);
  EigenMethod m = EigenMethod::kAuto;
  if (method == "dense") {
    m = EigenMethod::kDense;
  } else if (method == "iterative") {
    m = EigenMethod::kIterative;
  } else if (method != "auto") {
    throw Error(ErrorCode::kInvalidArgument, "unknown method '" + method + "'");
  }
  out << num(lambda_max_exact(h, m)) << "\n";
  return kExitOk;
}

int run_sweep(const std::string& in, const std::string& grid_text, std::ostream& out) {
  const auto model = infer_two_colored(load_hamiltonian(in));
  const auto grid = grid_text.empty() ? default_theta_grid(model.q) : parse_theta_grid(grid_text);
  const auto curve = rho_theta_sweep(model, grid);
  out << "theta,energy\n";
  for (std::size_t i = 0; i < curve.theta.size(); ++i) out << num(curve.theta[i]) << ',' << num(curve.energy[i]) << '\n';
  return kExitOk;
}

int run_study_verb(const std::string& config_path, std::ostream& out) {
  const auto cfg = parse_study_config(read_text_file(config_path));
  const auto rep = run_study(cfg);
  const auto summary = serialize_report_summary(cfg, rep);
  if (cfg.output.empty()) {
    out << rep.csv;
  } else {
    write_text_file(cfg.output, rep.csv);
    write_text_file(cfg.output + ".json", summary);
    out << summary;
  }
  return kExitOk;
}

}  // namespace

std::vector<double> parse_theta_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.rfind("log:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream ss(text.substr(4));
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw Error(ErrorCode::kInvalidArgument, "grid must be log:N:lo:hi");
    const double count = parse_double(parts[0]);
    const double lo = parse_double(parts[1]);
    const double hi = parse_double(parts[2]);
    const int n = static_cast<int>(count);
    if (n < 1 || n != count || !(lo > 0) || !(hi >= lo)) {
      throw Error(ErrorCode::kInvalidArgument, "grid must satisfy N >= 1 and 0 < lo <= hi");
    }
    for (int i = 0; i < n; ++i) {
      const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
      grid.push_back(lo * std::pow(hi / lo, t));
    }
    return grid;
  }
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) grid.push_back(parse_double(p));
  if (grid.empty()) throw Error(ErrorCode::kInvalidArgument, "empty theta grid");
  return grid;
}

int dispatch(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian-state approximations for sparse Majorana Hamiltonians", "fermopt"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate a random Hamiltonian");
  g->add_option("--family", gen.family, "syk | ssyk | sparse | two-colored")->required();
  g->add_option("--n", gen.n, "number of fermionic modes");
  g->add_option("--q", gen.q, "term weight");
  g->add_option("--k", gen.k, "sparsity");
  g->add_option("--n1", gen.n1, "phi Majoranas (two-colored)");
  g->add_option("--n2", gen.n2, "chi Majoranas (two-colored)");
  g->add_option("--seed", gen.seed, "random seed");
  g->add_option("--out", gen.out, "output path")->required();

  OptimizeArgs opt;
  auto* o = app.add_subcommand("optimize", "build a certified Gaussian state");
  o->add_option("--in", opt.in)->required();
  o->add_option("--pipeline", opt.pipeline)->check(CLI::IsMember({"auto", "strictq", "mixed24", "ssyk"}));
  o->add_option("--k", opt.k, "SSYK sparsity");
  o->add_option("--out-state", opt.out_state);
  o->add_option("--out-cert", opt.out_cert);

  std::string v_in;
  std::string v_state;
  auto* v = app.add_subcommand("verify", "re-evaluate Tr(H rho) by independent routes");
  v->add_option("--in", v_in)->required();
  v->add_option("--state", v_state)->required();

  std::string e_in;
  std::string e_method = "auto";
  auto* e = app.add_subcommand("exact", "largest eigenvalue");
  e->add_option("--in", e_in)->required();
  e->add_option("--method", e_method)->check(CLI::IsMember({"auto", "dense", "iterative"}));

  std::string s_in;
  std::string s_grid;
  auto* s = app.add_subcommand("sweep-theta", "rho_theta energy curve as CSV");
  s->add_option("--in", s_in)->required();
  s->add_option("--grid", s_grid, "log:N:lo:hi or comma list");

  std::string config;
  auto* st = app.add_subcommand("study", "run a batch study");
  st->add_option("--config", config)->required();

  std::vector<std::string> args(argv.size() > 1 ? argv.begin() + 1 : argv.end(), argv.end());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& ex) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << "\n" << app.help();
    return kExitError;
  }

  try {
    if (*g) return run_gen(gen, out);
    if (*o) return run_optimize(opt, out);
    if (*v) return run_verify(v_in, v_state, out);
    if (*e) return run_exact(e_in, e_method, out);
    if (*s) return run_sweep(s_in, s_grid, out);
    if (*st) return run_study_verb(config, out);
  } catch (const Error& ex) {
    err << "error [" << to_string(ex.code()) << "]: " << ex.what() << "\n";
    return kExitError;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitError;
  }
  err << app.help();
  return kExitError;
}

}  // namespace fermopt
