#include "wattbench/orchestrator/runner.hpp"

#include <unistd.h>

#include <atomic>
#include <set>

#include <spdlog/spdlog.h>

#include "wattbench/common/error.hpp"
#include "wattbench/common/template.hpp"
#include "wattbench/energy/sampler.hpp"

namespace wattbench::orchestrator {

namespace {

std::atomic<bool> g_in_flight{false};

class InFlightGuard {
public:
  InFlightGuard() {
    if (g_in_flight.exchange(true)) throw Error("another run is already in progress");
  }
  ~InFlightGuard() { g_in_flight = false; }
  InFlightGuard(const InFlightGuard&) = delete;
  InFlightGuard& operator=(const InFlightGuard&) = delete;
};

struct Attempt {
  bool ok = false;
  std::string reason;
  double joules = 0;
  workload::WorkloadSummary summary;
};

std::string render(const std::string& text, const std::map<std::string, std::string>& subs) {
  return tmpl::render(text, [&](const std::string& name) -> std::optional<std::string> {
    auto it = subs.find(name);
    if (it == subs.end()) return std::nullopt;
    return it->second;
  });
}

Attempt attempt(const RunContext& ctx, const matrix::RunEntry& entry) {
  const auto& exp = ctx.experiment;
  const auto& lc = exp.lifecycle;
  auto& h = ctx.harness;
  const auto subs = matrix::substitutions(exp, entry.config, entry.iteration);
  const auto env = matrix::environment(exp, entry.config, entry.iteration);
  Attempt a;

  auto teardown = [&] {
    for (const auto& cmd : lc.teardown_commands) {
      const auto rendered = render(cmd, subs);
      if (const int rc = h.run_command(rendered, env); rc != 0) {
        spdlog::warn("teardown command exited with {}: {}", rc, rendered);
      }
    }
  };

  for (const auto& cmd : lc.setup_commands) {
    const auto rendered = render(cmd, subs);
    if (const int rc = h.run_command(rendered, env); rc != 0) {
      spdlog::warn("setup command exited with {}: {}", rc, rendered);
      a.reason = reason::setup_failed;
      teardown();
      return a;
    }
  }

  std::optional<energy::EnergySource> source;
  std::optional<energy::Sampler> sampler;
  std::vector<energy::Target> targets;
  const auto period = std::chrono::nanoseconds(static_cast<std::int64_t>(h.sample_period_s(lc.sample_period_s) * 1e9));

  auto open_window = [&]() -> bool {
    try {
      const auto pidfile = lc.pidfile ? std::optional(render(*lc.pidfile, subs)) : std::nullopt;
      targets = h.targets(pidfile);
    } catch (const IoError& e) {
      spdlog::warn("{}", e.what());
      a.reason = reason::setup_failed;
      return false;
    }
    try {
      source.emplace(h.open_source(entry.config, entry.iteration));
      sampler.emplace(*source, targets, period);
      sampler->start();
    } catch (const Error& e) {
      spdlog::warn("energy source: {}", e.what());
      a.reason = reason::energy_source;
      return false;
    }
    return true;
  };

  if (lc.include_startup && !open_window()) {
    teardown();
    return a;
  }
  if (lc.readiness) {
    auto probe = *lc.readiness;
    probe.url = render(probe.url, subs);
    const auto outcome = h.wait_ready(probe);
    if (!outcome.ready) {
      spdlog::warn("{} not ready after {:.1f} s", probe.url, outcome.waited_s);
      a.reason = reason::readiness_timeout;
      if (sampler) sampler->stop();
      teardown();
      return a;
    }
  }
  if (!lc.include_startup && !open_window()) {
    teardown();
    return a;
  }

  try {
    a.summary = h.execute(ctx.plan, render(exp.workload.base_url, subs), entry.config, entry.iteration);
  } catch (const TransportError& e) {
    spdlog::warn("workload aborted: {}", e.what());
    a.reason = reason::transport_error;
    try {
      sampler->stop();
    } catch (const Error&) {
    }
    teardown();
    return a;
  }

  try {
    const auto samples = sampler->stop();
    const auto result = energy::integrate_session(samples);
    if (targets.empty()) {
      a.joules = result.system_joules;
    } else {
      for (const auto& [id, j] : result.per_target_joules) a.joules += j;
    }
  } catch (const Error& e) {
    spdlog::warn("energy source: {}", e.what());
    a.reason = reason::energy_source;
    teardown();
    return a;
  }
  teardown();

  if (a.summary.error_rate() > lc.error_rate_threshold) {
    spdlog::warn("error rate {:.4f} exceeds {:.4f}", a.summary.error_rate(), lc.error_rate_threshold);
    a.reason = reason::error_rate;
    return a;
  }
  a.ok = true;
  return a;
}

} // namespace

std::string local_host_name() {
  char buf[256] = {};
  if (gethostname(buf, sizeof buf - 1) != 0 || buf[0] == '\0') return "localhost";
  return buf;
}

MeasurementRecord run_single(const RunContext& ctx, const matrix::RunEntry& entry) {
  InFlightGuard guard;
  MeasurementRecord r;
  r.host = ctx.host;
  r.config_id = entry.config.id();
  r.dimensions = entry.config.assignments();
  r.iteration = entry.iteration;

  const int attempts = 1 + ctx.experiment.lifecycle.max_retries;
  for (int i = 0; i < attempts; ++i) {
    const auto started = ctx.harness.wall_now();
    auto a = attempt(ctx, entry);
    ctx.harness.sleep_for(ctx.experiment.lifecycle.cooldown_s);

    r.counts = a.summary.counts;
    r.errors = a.summary.error_count;
    r.started_at = format_rfc3339(a.summary.counts.total() > 0 ? a.summary.started_at : started);
    if (a.ok) {
      r.status = RunStatus::ok;
      r.reason.clear();
      r.joules = a.joules;
      r.runtime_s = a.summary.wall_runtime_s;
      return r;
    }
    r.status = RunStatus::failed;
    r.reason = a.reason;
    r.joules.reset();
    r.runtime_s.reset();
    if (i + 1 < attempts) spdlog::info("{} iteration {}: {}, retrying", r.config_id, r.iteration, r.reason);
  }
  return r;
}

RunSummary run_plan(const RunContext& ctx, const matrix::RunPlan& plan, const std::filesystem::path& output_csv,
                    const RunOptions& options) {
  std::vector<std::string> dims;
  for (const auto& d : ctx.experiment.dimensions) dims.push_back(d.name);

  std::set<std::pair<std::string, int>> done;
  std::vector<std::string> extra;
  std::error_code ec;
  if (std::filesystem::exists(output_csv, ec) && std::filesystem::file_size(output_csv, ec) > 0) {
    if (!options.resume) {
      throw IoError(output_csv.string() + " already exists; resume it or choose another output");
    }
    const auto existing = load_records(output_csv);
    if (existing.dimension_names != dims) {
      throw IoError(output_csv.string() + " was written for different dimensions");
    }
    extra = existing.extra_columns;
    for (const auto& r : existing.records) done.emplace(r.config_id, r.iteration);
  }

  RecordWriter writer(output_csv, dims, extra);
  RunSummary summary;
  std::size_t executed = 0;
  for (std::size_t k = 0; k < plan.entries.size(); ++k) {
    const auto& entry = plan.entries[k];
    if (done.count({entry.config.id(), entry.iteration})) {
      ++summary.skipped;
      continue;
    }
    if (options.stop_after && executed >= *options.stop_after) break;
    ctx.harness.begin_entry(k);
    const auto record = run_single(ctx, entry);
    writer.append(record);
    ++executed;
    (record.status == RunStatus::ok ? summary.ok : summary.failed)++;
    if (options.on_record) options.on_record(record, k + 1, plan.entries.size());
  }
  return summary;
}

} // namespace wattbench::orchestrator
