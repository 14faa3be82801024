#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rab::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;  // usage, I/O, validation, failed example check
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitNoFiniteSolution = 3;
inline constexpr int kExitVerifyFailed = 4;

/// Runs the `rab` command line. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rab::cli
