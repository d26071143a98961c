#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fermopt/fermion_core.hpp"

namespace fermopt {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedDocument, "malformed Hamiltonian document: " + what);
}

}  // namespace

MajoranaHamiltonian parse_hamiltonian(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    malformed(e.what());
  }
  if (!doc.is_object()) malformed("top level must be an object");
  if (!doc.contains("n_modes") || !doc["n_modes"].is_number_integer()) {
    malformed("missing integer \"n_modes\"");
  }
  if (!doc.contains("terms") || !doc["terms"].is_array()) malformed("missing array \"terms\"");
  const int n_modes = doc["n_modes"].get<int>();
  if (n_modes <= 0) malformed("\"n_modes\" must be positive");

  std::vector<InteractionTerm> terms;
  terms.reserve(doc["terms"].size());
  for (const auto& t : doc["terms"]) {
    if (!t.is_object() || !t.contains("indices") || !t["indices"].is_array() ||
        !t.contains("coeff") || !t["coeff"].is_number()) {
      malformed("each term needs \"indices\" (array) and \"coeff\" (number)");
    }
    InteractionTerm term;
    for (const auto& i : t["indices"]) {
      if (!i.is_number_integer()) malformed("indices must be integers");
      term.indices.push_back(i.get<int>());
    }
    term.coeff = t["coeff"].get<double>();
    terms.push_back(std::move(term));
  }
  return MajoranaHamiltonian(n_modes, std::move(terms));
}

std::string serialize_hamiltonian(const MajoranaHamiltonian& h) {
  json doc;
  doc["n_modes"] = h.n_modes();
  json terms = json::array();
  for (const auto& t : h.terms()) {
    terms.push_back({{"indices", t.indices}, {"coeff", t.coeff}});
  }
  doc["terms"] = std::move(terms);
  return doc.dump(1) + "\n";
}

MajoranaHamiltonian load_hamiltonian(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_hamiltonian(buf.str());
}

void save_hamiltonian(const MajoranaHamiltonian& h, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path);
  out << serialize_hamiltonian(h);
}

}  // namespace fermopt
