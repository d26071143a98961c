#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fermopt {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNoGuarantee = 2;

/// Runs one verb. argv[0] is the program name.
int dispatch(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

/// "log:N:lo:hi" or a comma separated list of positive values.
std::vector<double> parse_theta_grid(const std::string& text);

}  // namespace fermopt
