#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pipgscp::cli {

inline constexpr int kExitConverged = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 2;

/// Entry point of the `pipgscp` tool. `args` excludes the program name.
/// Exit codes: 0 converged (or campaign finished), 2 SCP hit its iteration
/// cap, 1 any error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pipgscp::cli
