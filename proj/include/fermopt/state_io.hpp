#pragma once

#include <optional>
#include <string>

#include "fermopt/gaussian.hpp"

namespace fermopt {

/// A state document: matching form when `matching` is set, otherwise the
/// general correlation-matrix form. `gamma` is always filled.
struct StateDocument {
  std::optional<MatchingState> matching;
  CorrelationMatrix gamma;
};

/// {"n_modes", "pairs": [[a,b]...], "signs": [...]}.
std::string serialize_state(const MatchingState& state);
/// {"n_modes", "gamma": [[...]...]} row-major.
std::string serialize_state(const CorrelationMatrix& gamma);

StateDocument parse_state(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace fermopt
