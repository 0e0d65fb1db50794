#pragma once

#include <iosfwd>

#include "cli/config.hpp"

namespace grfkit::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

/// Executes a validated configuration. Primary output goes to the file named
/// by cfg.output_path (or `out`); progress and summaries go to `log`.
/// Throws on runtime failure.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& log);

/// Full entry point: parse, run, and map failures onto exit codes.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& log);

}  // namespace grfkit::cli
