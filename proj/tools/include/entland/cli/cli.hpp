#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace entland::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

/// Runs `entropy-landscape` in process. `args` excludes the program name.
/// Results go to the --out files or to `out`; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace entland::cli
