#include "wattbench/matrix/run_plan.hpp"

#include "wattbench/common/error.hpp"

namespace wattbench::matrix {

Ordering parse_ordering(std::string_view text) {
  if (text == "blocked") return Ordering::blocked;
  if (text == "round-robin" || text == "round_robin") return Ordering::round_robin;
  throw ConfigError("unknown ordering '" + std::string(text) + "' (expected blocked or round-robin)");
}

std::string_view to_string(Ordering ordering) {
  return ordering == Ordering::blocked ? "blocked" : "round-robin";
}

RunPlan build_run_plan(std::span<const StackConfig> configs, int iterations, Ordering ordering) {
  if (iterations < 1) throw ConfigError("iterations must be at least 1, got " + std::to_string(iterations));
  RunPlan plan;
  plan.iterations_per_config = iterations;
  plan.ordering = ordering;
  plan.entries.reserve(configs.size() * static_cast<std::size_t>(iterations));
  if (ordering == Ordering::blocked) {
    for (std::size_t c = 0; c < configs.size(); ++c) {
      for (int i = 0; i < iterations; ++i) plan.entries.push_back({configs[c], c, i});
    }
  } else {
    for (int i = 0; i < iterations; ++i) {
      for (std::size_t c = 0; c < configs.size(); ++c) plan.entries.push_back({configs[c], c, i});
    }
  }
  return plan;
}

} // namespace wattbench::matrix
