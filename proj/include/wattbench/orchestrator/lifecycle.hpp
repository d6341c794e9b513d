#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wattbench/workload/http.hpp"

namespace wattbench::orchestrator {

/// What happens around one measured run. Commands are shell templates;
/// `{name}` placeholders are filled from the configuration's dimension
/// values and substitution variables.
struct RunLifecycle {
  std::vector<std::string> setup_commands;
  std::vector<std::string> teardown_commands;
  std::optional<workload::ReadinessProbe> readiness;
  /// File holding the pid of the process tree to measure. Without one the
  /// whole host is attributed to the run.
  std::optional<std::string> pidfile;
  double cooldown_s = 5.0;
  int max_retries = 0;
  double error_rate_threshold = 0.01;
  bool include_startup = false;  ///< open the energy window before setup
  double sample_period_s = 0.1;
};

} // namespace wattbench::orchestrator
