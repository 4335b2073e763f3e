#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace crossing::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitTable = 2;
inline constexpr int kExitInversion = 3;
inline constexpr int kExitDivergence = 4;
inline constexpr int kExitUsage = 64;

/// Runs one command. `args` excludes the program name. Results go to --out or `out`;
/// diagnostics go to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace crossing::cli
