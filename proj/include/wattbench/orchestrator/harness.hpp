#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wattbench/energy/clock.hpp"
#include "wattbench/energy/source.hpp"
#include "wattbench/matrix/experiment.hpp"
#include "wattbench/workload/http.hpp"

namespace wattbench::orchestrator {

using Environment = std::vector<std::pair<std::string, std::string>>;

/// Everything run_single needs from the outside world. LiveHarness talks to
/// real processes, sockets and counters; SimulatedHarness replays the same
/// lifecycle against virtual time.
class Harness {
public:
  virtual ~Harness() = default;

  /// Called before each plan entry with its position in the plan.
  virtual void begin_entry(std::size_t /*position*/) {}
  /// Exit status of a shell command.
  virtual int run_command(const std::string& command, const Environment& env) = 0;
  virtual workload::ProbeOutcome wait_ready(const workload::ReadinessProbe& probe) = 0;
  virtual workload::WorkloadSummary execute(const workload::TestPlan& plan, const std::string& base_url,
                                            const matrix::StackConfig& config, int iteration) = 0;
  virtual void sleep_for(double seconds) = 0;
  virtual energy::EnergySource open_source(const matrix::StackConfig& config, int iteration) = 0;
  /// Process trees to measure. Empty means the whole host.
  virtual std::vector<energy::Target> targets(const std::optional<std::string>& pidfile) = 0;
  virtual energy::Clock& clock() = 0;
  virtual std::chrono::system_clock::time_point wall_now() = 0;
  /// Sampling period to use; a simulation only needs the window bounds.
  virtual double sample_period_s(double configured) { return configured; }
};

class LiveHarness final : public Harness {
public:
  explicit LiveHarness(energy::EnergySourceDescriptor source, workload::ExecuteOptions options = {});

  int run_command(const std::string& command, const Environment& env) override;
  workload::ProbeOutcome wait_ready(const workload::ReadinessProbe& probe) override;
  workload::WorkloadSummary execute(const workload::TestPlan& plan, const std::string& base_url,
                                    const matrix::StackConfig& config, int iteration) override;
  void sleep_for(double seconds) override;
  energy::EnergySource open_source(const matrix::StackConfig& config, int iteration) override;
  std::vector<energy::Target> targets(const std::optional<std::string>& pidfile) override;
  energy::Clock& clock() override { return clock_; }
  std::chrono::system_clock::time_point wall_now() override { return std::chrono::system_clock::now(); }

private:
  energy::EnergySourceDescriptor source_;
  workload::ExecuteOptions options_;
  energy::SteadyClock clock_;
};

/// Deterministic stand-in for the stub application. Entry k starts at
/// epoch + k hours of virtual time; the workload takes
/// sim_runtime_s * (1 + sim_runtime_noise * z) seconds and issues exactly
/// the plan's request counts.
class SimulatedHarness final : public Harness {
public:
  static constexpr std::int64_t kEpochSeconds = 1704067200; // 2024-01-01T00:00:00Z

  SimulatedHarness(energy::EnergySourceDescriptor source, matrix::WorkloadSpec workload);

  void begin_entry(std::size_t position) override;
  int run_command(const std::string& command, const Environment& env) override;
  workload::ProbeOutcome wait_ready(const workload::ReadinessProbe& probe) override;
  workload::WorkloadSummary execute(const workload::TestPlan& plan, const std::string& base_url,
                                    const matrix::StackConfig& config, int iteration) override;
  void sleep_for(double seconds) override { clock_.advance_s(seconds); }
  energy::EnergySource open_source(const matrix::StackConfig& config, int iteration) override;
  std::vector<energy::Target> targets(const std::optional<std::string>& pidfile) override;
  energy::Clock& clock() override { return clock_; }
  std::chrono::system_clock::time_point wall_now() override;
  double sample_period_s(double) override { return 0.0; }

  /// Test hooks: override command exit codes and readiness.
  std::function<int(const std::string&)> command_hook;
  std::function<bool()> ready_hook;
  /// Fraction of requests reported as errors.
  double error_fraction = 0.0;

  const std::vector<std::string>& commands() const { return commands_; }
  double runtime_for(const std::string& config_id, int iteration) const;

private:
  energy::EnergySourceDescriptor source_;
  matrix::WorkloadSpec workload_;
  energy::VirtualClock clock_;
  std::vector<std::string> commands_;
};

} // namespace wattbench::orchestrator
