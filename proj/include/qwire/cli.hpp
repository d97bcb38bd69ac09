#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qwire::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNumeric = 3, kIo = 4 };

/// Runs one subcommand (`args` excludes the program name):
///   spectrum | eigenfunctions | evolve | maslov | edge-scan | wire-check | oracle-compare
/// Results go to --output (default `out`); failures print one line to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qwire::cli
