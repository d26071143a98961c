#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fermopt/ensembles.hpp"
#include "fermopt/experiments.hpp"
#include "fermopt/gaussian.hpp"
#include "fermopt/numeric_max.hpp"
#include "fermopt/optimizer.hpp"
#include "fermopt/oracle.hpp"
#include "fermopt/pfaffian.hpp"
#include "fermopt/state_io.hpp"

namespace py = pybind11;
using namespace fermopt;

namespace {

MajoranaHamiltonian from_terms(int n_modes, const std::vector<std::pair<IndexSet, double>>& terms) {
  std::vector<InteractionTerm> t;
  t.reserve(terms.size());
  for (const auto& [idx, c] : terms) t.push_back({idx, c});
  return MajoranaHamiltonian(n_modes, std::move(t));
}

py::dict optimize_dict(const PipelineResult& r) {
  py::dict d;
  d["state"] = serialize_state(r.state);
  d["certificate"] = serialize_certificate(r.certificate);
  d["achieved"] = r.certificate.achieved;
  d["upper_bound"] = r.certificate.upper_bound;
  d["guarantee_holds"] = r.certificate.guarantee_holds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_fermopt, m) {
  m.doc() = "Gaussian-state optimization for Majorana Hamiltonians";

  py::register_exception<Error>(m, "FermoptError", PyExc_ValueError);

  py::class_<MajoranaHamiltonian>(m, "Hamiltonian")
      .def(py::init(&from_terms), py::arg("n_modes"), py::arg("terms"))
      .def_static("from_json", &parse_hamiltonian)
      .def("to_json", &serialize_hamiltonian)
      .def_property_readonly("n_modes", &MajoranaHamiltonian::n_modes)
      .def_property_readonly("n_majoranas", &MajoranaHamiltonian::n_majoranas)
      .def("__len__", [](const MajoranaHamiltonian& h) { return h.size(); })
      .def("terms", [](const MajoranaHamiltonian& h) {
        std::vector<std::pair<IndexSet, double>> out;
        for (const auto& t : h.terms()) out.emplace_back(t.indices, t.coeff);
        return out;
      })
      .def("total_strength", [](const MajoranaHamiltonian& h) { return total_strength(h); });

  m.def("canonical_sign", [](const IndexSet& idx) { return canonical_sign(idx); });
  m.def("pfaffian", &pfaffian, py::arg("a"));

  m.def("gen_syk", &gen_syk_q, py::arg("n"), py::arg("q"), py::arg("seed"));
  m.def("gen_ssyk", &gen_ssyk, py::arg("n"), py::arg("k"), py::arg("seed"));
  m.def("gen_sparse_random",
        [](int n, int q, int k, std::uint64_t seed) { return gen_sparse_random(n, q, k, CoeffDist::kNormal, seed); },
        py::arg("n"), py::arg("q"), py::arg("k"), py::arg("seed"));
  m.def("generate", [](const std::string& spec_json) { return generate(parse_spec(spec_json)); });

  m.def("expectation",
        [](const MajoranaHamiltonian& h, const std::string& state_json) {
          return hamiltonian_expectation(parse_state(state_json).gamma, h);
        },
        py::arg("h"), py::arg("state"), "Tr(H rho) for a state document");
  m.def("correlation_matrix",
        [](const std::string& state_json) { return parse_state(state_json).gamma.gamma(); });

  m.def("optimize",
        [](const MajoranaHamiltonian& h, const std::string& pipeline, int k) {
          if (pipeline == "auto") return optimize_dict(optimize_auto(h));
          if (pipeline == "ssyk") return optimize_dict(optimize_ssyk(h, k).result);
          const auto p = parse_pipeline(pipeline);
          return optimize_dict(p == Pipeline::kStrictQ ? optimize_strict_q(h) : optimize_mixed_24(h));
        },
        py::arg("h"), py::arg("pipeline") = "auto", py::arg("k") = 0);

  m.def("lambda_max", [](const MajoranaHamiltonian& h) { return lambda_max_exact(h); }, py::arg("h"));
  m.def("gaussian_numeric_max",
        [](const MajoranaHamiltonian& h, int restarts, std::uint64_t seed) {
          NumericMaxOptions o;
          o.restarts = restarts;
          o.seed = seed;
          const auto r = gaussian_numeric_max(h, o);
          return py::make_tuple(r.value, r.gamma.gamma());
        },
        py::arg("h"), py::arg("restarts") = 8, py::arg("seed") = 0);

  m.def("run_study",
        [](const std::string& config_json) {
          const auto cfg = parse_study_config(config_json);
          const auto report = run_study(cfg);
          return py::make_tuple(report.csv, serialize_report_summary(cfg, report));
        },
        py::arg("config"), "Returns (csv, summary_json)");
}
