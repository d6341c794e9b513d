#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "wattbench/matrix/experiment.hpp"
#include "wattbench/matrix/run_plan.hpp"
#include "wattbench/orchestrator/harness.hpp"
#include "wattbench/orchestrator/record.hpp"
#include "wattbench/workload/test_plan.hpp"

namespace wattbench::orchestrator {

/// Failure reasons written to the `reason` column.
namespace reason {
inline constexpr const char* setup_failed = "setup-failed";
inline constexpr const char* readiness_timeout = "readiness-timeout";
inline constexpr const char* transport_error = "transport-error";
inline constexpr const char* error_rate = "error-rate";
inline constexpr const char* energy_source = "energy-source";
} // namespace reason

struct RunContext {
  const matrix::Experiment& experiment;
  const workload::TestPlan& plan;
  Harness& harness;
  std::string host;
};

/// Setup, readiness, measured workload, teardown, cooldown; retried up to
/// lifecycle.max_retries times. Teardown runs after every attempt. Throws
/// if another run_single is already in flight in this process.
MeasurementRecord run_single(const RunContext& ctx, const matrix::RunEntry& entry);

struct RunOptions {
  bool resume = false;
  std::optional<std::size_t> stop_after; ///< execute at most this many entries
  std::function<void(const MeasurementRecord&, std::size_t done, std::size_t total)> on_record;
};

struct RunSummary {
  std::size_t ok = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0; ///< already present in the CSV
};

/// Executes the entries in order, appending each record to `output_csv` as
/// soon as it exists. With `resume`, (config_id, iteration) pairs already
/// in the file are skipped; without it an existing nonempty file is an
/// error.
RunSummary run_plan(const RunContext& ctx, const matrix::RunPlan& plan, const std::filesystem::path& output_csv,
                    const RunOptions& options = {});

/// Local host name, or "localhost".
std::string local_host_name();

} // namespace wattbench::orchestrator
