#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace carleman::cli {

enum ExitCode : int { exit_ok = 0, exit_failed = 1, exit_invalid = 2, exit_numerical = 3 };

/// Runs one command; args exclude the program name. Reports go to `out` (or --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace carleman::cli
