#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trispec::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitFail = 3;

/// Runs the command line `args` (without the program name). Everything the
/// tool prints goes to `out` and `err`; the return value is the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "8,16,32", "2..40" and "1..3:0.5" (and comma-joined mixes).
[[nodiscard]] std::vector<double> parse_schedule(const std::string& text);

}  // namespace trispec::cli
