#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace afc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitModelError = 3;

/// Runs `afc-pulse-sim` with `args` (program name excluded). Results go to `out` or to the
/// --out file; diagnostics go to `err`. Returns the process exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace afc
