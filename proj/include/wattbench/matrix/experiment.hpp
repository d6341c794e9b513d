#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wattbench/energy/source.hpp"
#include "wattbench/matrix/run_plan.hpp"
#include "wattbench/matrix/stack_config.hpp"
#include "wattbench/orchestrator/lifecycle.hpp"

namespace wattbench::matrix {

/// Where the workload comes from. `app = "stub"` selects the built-in
/// simulated application (no external processes, virtual time).
struct WorkloadSpec {
  std::filesystem::path plan_path; ///< resolved against the experiment file
  std::string base_url;
  bool stub_app = false;
  double sim_runtime_s = 60.0;     ///< stub app: mean workload runtime
  double sim_runtime_noise = 0.0;  ///< stub app: relative sd of runtime
};

struct Experiment {
  std::string name;
  std::vector<Dimension> dimensions;
  std::vector<CompatibilityRule> rules;
  int iterations = 1;
  Ordering ordering = Ordering::blocked;
  std::string host; ///< empty means the local host name
  orchestrator::RunLifecycle lifecycle;
  WorkloadSpec workload;
  energy::EnergySourceDescriptor energy;
  std::filesystem::path source_path;
};

Experiment parse_experiment(std::string_view toml_text, std::string_view source_name = "<experiment>",
                            const std::filesystem::path& base_dir = {});
Experiment load_experiment(const std::filesystem::path& path);

/// Names a lifecycle template may reference: every dimension name, every
/// substitution key, `config_id` and `iteration`.
std::vector<std::string> template_names(const Experiment& experiment);

/// Placeholder values for one run.
std::map<std::string, std::string> substitutions(const Experiment& experiment, const StackConfig& config,
                                                 int iteration);

/// STACK_<NAME>=value environment for lifecycle commands (names upper
/// cased, non-alphanumerics replaced by '_').
std::vector<std::pair<std::string, std::string>> environment(const Experiment& experiment, const StackConfig& config,
                                                              int iteration);

} // namespace wattbench::matrix
