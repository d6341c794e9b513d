#include "wattbench/orchestrator/harness.hpp"

#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <fstream>
#include <thread>

#include "wattbench/common/error.hpp"

extern char** environ;

namespace wattbench::orchestrator {

// ------------------------------------------------------------------ live

LiveHarness::LiveHarness(energy::EnergySourceDescriptor source, workload::ExecuteOptions options)
    : source_(std::move(source)), options_(options) {}

int LiveHarness::run_command(const std::string& command, const Environment& env) {
  std::vector<std::string> storage;
  for (char** e = environ; *e != nullptr; ++e) {
    std::string_view entry(*e);
    const auto key = entry.substr(0, entry.find('='));
    const bool overridden = std::any_of(env.begin(), env.end(), [&](const auto& kv) { return kv.first == key; });
    if (!overridden) storage.emplace_back(entry);
  }
  for (const auto& [k, v] : env) storage.push_back(k + "=" + v);
  std::vector<char*> envp;
  for (auto& s : storage) envp.push_back(s.data());
  envp.push_back(nullptr);

  // Command output goes to our stderr so stdout stays reserved for data.
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, STDERR_FILENO, STDOUT_FILENO);

  std::string shell = "/bin/sh", flag = "-c", cmd = command;
  char* argv[] = {shell.data(), flag.data(), cmd.data(), nullptr};
  pid_t pid = 0;
  const int rc = posix_spawn(&pid, "/bin/sh", &actions, nullptr, argv, envp.data());
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) return 127;

  int status = 0;
  while (waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) return 127;
  }
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
}

workload::ProbeOutcome LiveHarness::wait_ready(const workload::ReadinessProbe& probe) {
  return workload::probe_ready(probe);
}

workload::WorkloadSummary LiveHarness::execute(const workload::TestPlan& plan, const std::string& base_url,
                                               const matrix::StackConfig&, int) {
  return workload::execute_plan(plan, base_url, options_);
}

void LiveHarness::sleep_for(double seconds) {
  if (seconds > 0) std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
}

energy::EnergySource LiveHarness::open_source(const matrix::StackConfig& config, int iteration) {
  return energy::open_source(source_, clock_, config.id(), iteration);
}

std::vector<energy::Target> LiveHarness::targets(const std::optional<std::string>& pidfile) {
  if (source_.kind == energy::SourceKind::simulated) return {{"app", 0}};
  if (!pidfile) return {};
  std::ifstream in(*pidfile);
  int pid = 0;
  if (!(in >> pid) || pid <= 0) throw IoError("pidfile " + *pidfile + " does not hold a pid");
  return {{"app", pid}};
}

// ------------------------------------------------------------- simulated

SimulatedHarness::SimulatedHarness(energy::EnergySourceDescriptor source, matrix::WorkloadSpec workload)
    : source_(std::move(source)), workload_(std::move(workload)) {
  if (source_.kind != energy::SourceKind::simulated) throw ConfigError("simulated harness needs a simulated source");
}

void SimulatedHarness::begin_entry(std::size_t position) {
  clock_.set_ns(static_cast<std::int64_t>(position) * 3600LL * 1000000000LL);
}

int SimulatedHarness::run_command(const std::string& command, const Environment&) {
  commands_.push_back(command);
  return command_hook ? command_hook(command) : 0;
}

workload::ProbeOutcome SimulatedHarness::wait_ready(const workload::ReadinessProbe& probe) {
  workload::ProbeOutcome out;
  out.polls = 1;
  out.ready = ready_hook ? ready_hook() : true;
  if (!out.ready) {
    out.waited_s = probe.timeout_s;
    clock_.advance_s(probe.timeout_s);
  }
  return out;
}

double SimulatedHarness::runtime_for(const std::string& config_id, int iteration) const {
  double runtime = workload_.sim_runtime_s;
  if (workload_.sim_runtime_noise > 0) {
    runtime *= 1.0 + workload_.sim_runtime_noise * energy::seeded_normal(source_.simulated.seed, config_id, iteration, 1);
  }
  return std::max(runtime, 1e-3 * workload_.sim_runtime_s);
}

workload::WorkloadSummary SimulatedHarness::execute(const workload::TestPlan& plan, const std::string&,
                                                    const matrix::StackConfig& config, int iteration) {
  workload::WorkloadSummary s;
  s.counts = workload::total_requests(plan);
  s.error_count = static_cast<std::uint64_t>(std::llround(error_fraction * static_cast<double>(s.counts.total())));
  s.started_at = wall_now();
  // Whole nanoseconds so the reported runtime equals the energy window.
  const auto ns = static_cast<std::int64_t>(std::llround(runtime_for(config.id(), iteration) * 1e9));
  clock_.advance_ns(ns);
  s.wall_runtime_s = static_cast<double>(ns) * 1e-9;
  s.ended_at = wall_now();
  return s;
}

energy::EnergySource SimulatedHarness::open_source(const matrix::StackConfig& config, int iteration) {
  return energy::open_source(source_, clock_, config.id(), iteration);
}

std::vector<energy::Target> SimulatedHarness::targets(const std::optional<std::string>&) { return {{"app", 0}}; }

std::chrono::system_clock::time_point SimulatedHarness::wall_now() {
  return std::chrono::system_clock::time_point(std::chrono::seconds(kEpochSeconds)) +
         std::chrono::duration_cast<std::chrono::system_clock::duration>(std::chrono::nanoseconds(clock_.now_ns()));
}

} // namespace wattbench::orchestrator
