#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lamptree::cli {

inline constexpr int kExitSuccess = 0;
/// Unexpected internal failure.
inline constexpr int kExitFailure = 1;
/// Bad command line, unreadable or invalid config.
inline constexpr int kExitConfigError = 2;
/// The run finished but one of its exact checks failed.
inline constexpr int kExitInvariantViolation = 3;

/// The `lamptree` tool. `args` excludes the program name. Result rows go to
/// `out` unless the config or --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Prints one line per failed check to `err`; the exit code of the run.
int report_violations(const std::vector<std::string>& violations, std::ostream& err);

}  // namespace lamptree::cli
