#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace wattbench::cli {

/// Process exit codes.
enum ExitCode : int {
  exit_ok = 0,
  exit_run_failures = 1,
  exit_config_error = 2,
  exit_source_unavailable = 3,
  exit_analysis_infeasible = 4,
};

/// Entry point behind the `wattbench` binary. `args` excludes the program
/// name. Data goes to `out`, diagnostics to `err` and the log.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace wattbench::cli
