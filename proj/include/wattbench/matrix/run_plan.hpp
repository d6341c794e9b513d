#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wattbench/matrix/stack_config.hpp"

namespace wattbench::matrix {

enum class Ordering {
  blocked,     ///< all iterations of a config before the next config
  round_robin, ///< iteration k of every config before iteration k+1
};

Ordering parse_ordering(std::string_view text);
std::string_view to_string(Ordering ordering);

struct RunEntry {
  StackConfig config;
  std::size_t config_index = 0;
  int iteration = 0; ///< 0-based
};

struct RunPlan {
  std::vector<RunEntry> entries;
  int iterations_per_config = 1;
  Ordering ordering = Ordering::blocked;
};

RunPlan build_run_plan(std::span<const StackConfig> configs, int iterations, Ordering ordering);

} // namespace wattbench::matrix
