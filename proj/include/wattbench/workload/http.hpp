#pragma once

#include <chrono>
#include <cstdint>
#include <string>

#include "wattbench/workload/test_plan.hpp"

namespace wattbench::workload {

struct ReadinessProbe {
  std::string url;
  int expected_status = 200;
  double timeout_s = 60.0;
  double poll_interval_s = 0.5;
};

struct ProbeOutcome {
  bool ready = false;
  double waited_s = 0.0;
  int polls = 0;
};

/// Polls `probe.url` until it answers with the expected status or the
/// timeout elapses. A timeout is an outcome, not an exception.
ProbeOutcome probe_ready(const ReadinessProbe& probe);

struct WorkloadSummary {
  MethodCounts counts;
  std::uint64_t error_count = 0;
  double wall_runtime_s = 0.0;
  std::chrono::system_clock::time_point started_at;
  std::chrono::system_clock::time_point ended_at;

  double error_rate() const { return counts.total() == 0 ? 0.0 : static_cast<double>(error_count) / counts.total(); }
};

struct ExecuteOptions {
  double request_timeout_s = 30.0;
};

/// Runs the groups in order; inside a group `workers` threads each execute
/// the steps `loops` times with worker-local captures. Unexpected statuses
/// are counted, not fatal. A transport failure on a worker's first request
/// of a group aborts the run with TransportError.
WorkloadSummary execute_plan(const TestPlan& plan, const std::string& base_url, const ExecuteOptions& options = {});

/// "http://host:port/prefix" split into origin and path prefix.
struct HttpUrl {
  std::string origin;
  std::string path; ///< without trailing '/', possibly empty
};
HttpUrl parse_url(const std::string& url);

} // namespace wattbench::workload
