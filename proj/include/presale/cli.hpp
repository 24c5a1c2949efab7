#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace presale {

/// Exit codes shared by every subcommand.
inline constexpr int exit_ok = 0;
inline constexpr int exit_verification_failed = 1;
inline constexpr int exit_usage_error = 2;

/// Runs the command-line front end (subcommands: cutoff, sweep, optimal,
/// verify, report) against the given streams and returns the exit code.
/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace presale
