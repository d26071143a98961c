#include "fermopt/state_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fermopt {

using nlohmann::json;

std::string serialize_state(const MatchingState& state) {
  nlohmann::ordered_json doc;
  doc["n_modes"] = state.n_majoranas() / 2;
  json pairs = json::array();
  for (const auto& [a, b] : state.matching.pairs()) pairs.push_back({a, b});
  doc["pairs"] = std::move(pairs);
  doc["signs"] = state.signs;
  return doc.dump(1) + "\n";
}

std::string serialize_state(const CorrelationMatrix& gamma) {
  nlohmann::ordered_json doc;
  doc["n_modes"] = gamma.n_modes();
  json rows = json::array();
  for (int r = 0; r < gamma.n_majoranas(); ++r) {
    json row = json::array();
    for (int c = 0; c < gamma.n_majoranas(); ++c) row.push_back(gamma(r, c));
    rows.push_back(std::move(row));
  }
  doc["gamma"] = std::move(rows);
  return doc.dump(1) + "\n";
}

StateDocument parse_state(const std::string& text) {
  StateDocument out;
  try {
    const json doc = json::parse(text);
    const int n = doc.at("n_modes").get<int>();
    if (n <= 0) throw Error(ErrorCode::kMalformedDocument, "malformed state: n_modes must be positive");
    if (doc.contains("pairs")) {
      std::vector<Dimer> pairs;
      for (const auto& p : doc.at("pairs")) {
        if (!p.is_array() || p.size() != 2) {
          throw Error(ErrorCode::kMalformedDocument, "malformed state: pairs must be [a, b]");
        }
        pairs.emplace_back(p[0].get<int>(), p[1].get<int>());
      }
      auto signs = doc.at("signs").get<std::vector<int>>();
      out.matching = MatchingState(Matching(2 * n, std::move(pairs)), std::move(signs));
      out.gamma = correlation_from_matching(*out.matching);
    } else {
      const auto& rows = doc.at("gamma");
      if (!rows.is_array() || static_cast<int>(rows.size()) != 2 * n) {
        throw Error(ErrorCode::kMalformedDocument, "malformed state: gamma must be 2n x 2n");
      }
      Eigen::MatrixXd g(2 * n, 2 * n);
      for (int r = 0; r < 2 * n; ++r) {
        const auto& row = rows[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<int>(row.size()) != 2 * n) {
          throw Error(ErrorCode::kMalformedDocument, "malformed state: gamma must be 2n x 2n");
        }
        for (int c = 0; c < 2 * n; ++c) g(r, c) = row[static_cast<std::size_t>(c)].get<double>();
      }
      out.gamma = CorrelationMatrix(std::move(g));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedDocument, std::string("malformed state: ") + e.what());
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path);
  out << text;
}

}  // namespace fermopt
