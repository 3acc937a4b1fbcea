#pragma once
// Command-line front end. Exit codes:
//   0 success
//   1 any other failure (e.g. a provider with no evidence under FIRE)
//   2 usage, schema or configuration error, unknown agent
//   3 I/O error
//   4 preferred provider does not strictly outrank the other one
//   5 running-example golden mismatch
// Data goes to `out`, diagnostics to `err`.

#include <iosfwd>
#include <string>
#include <vector>

#include "reptrace/error.hpp"

namespace reptrace::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitOrder = 4;
inline constexpr int kExitGolden = 5;

int exit_code(ErrorCode code);

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace reptrace::cli
