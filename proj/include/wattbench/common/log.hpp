#pragma once

#include <spdlog/spdlog.h>

namespace wattbench::log {

/// Configures the process-wide logger: stderr sink, level taken from the
/// WATTBENCH_LOG environment variable (trace, debug, info, warn, error,
/// off). Defaults to info.
void init();

} // namespace wattbench::log
