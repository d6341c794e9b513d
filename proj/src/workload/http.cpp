#include "wattbench/workload/http.hpp"

#include <atomic>
#include <mutex>
#include <thread>
#include <unordered_map>

#include <httplib.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "wattbench/common/error.hpp"
#include "wattbench/common/template.hpp"

namespace wattbench::workload {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::chrono::microseconds to_us(double seconds) {
  return std::chrono::microseconds(static_cast<std::int64_t>(seconds * 1e6));
}

std::optional<std::string> extract_field(const std::string& body, const std::string& path) {
  auto doc = nlohmann::json::parse(body, nullptr, false);
  if (doc.is_discarded()) return std::nullopt;
  const nlohmann::json* cur = &doc;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    const auto dot = path.find('.', pos);
    const auto key = path.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (cur->is_object()) {
      auto it = cur->find(key);
      if (it == cur->end()) return std::nullopt;
      cur = &*it;
    } else if (cur->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(key);
      } catch (const std::exception&) {
        return std::nullopt;
      }
      if (idx >= cur->size()) return std::nullopt;
      cur = &(*cur)[idx];
    } else {
      return std::nullopt;
    }
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  if (cur->is_string()) return cur->get<std::string>();
  if (cur->is_null() || cur->is_structured()) return std::nullopt;
  return cur->dump();
}

httplib::Result send(httplib::Client& client, HttpMethod method, const std::string& path, const std::string& body) {
  const char* type = "application/json";
  switch (method) {
  case HttpMethod::get: return client.Get(path);
  case HttpMethod::post: return client.Post(path, body, type);
  case HttpMethod::put: return client.Put(path, body, type);
  case HttpMethod::del: return client.Delete(path, body, type);
  }
  return client.Get(path);
}

void configure(httplib::Client& client, double timeout_s) {
  const auto us = to_us(timeout_s);
  client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(us).count(), us.count() % 1000000);
  client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(us).count(), us.count() % 1000000);
  client.set_write_timeout(std::chrono::duration_cast<std::chrono::seconds>(us).count(), us.count() % 1000000);
  client.set_keep_alive(true);
  client.set_tcp_nodelay(true);
}

struct GroupState {
  std::atomic<std::uint64_t> counts[4]{};
  std::atomic<std::uint64_t> errors{0};
  std::atomic<bool> aborted{false};
  std::mutex error_mutex;
  std::string abort_message;
};

void run_worker(const OperationGroup& group, int worker, const HttpUrl& url, double timeout_s, GroupState& state) {
  httplib::Client client(url.origin);
  configure(client, timeout_s);
  std::unordered_map<std::string, std::string> vars;
  vars["worker"] = std::to_string(worker);
  vars["group"] = group.name;

  bool first_request = true;
  for (int loop = 0; loop < group.loops; ++loop) {
    vars["iteration"] = std::to_string(loop);
    for (const auto& step : group.steps) {
      if (state.aborted.load(std::memory_order_relaxed)) return;
      const auto lookup = [&](const std::string& name) -> std::optional<std::string> {
        auto it = vars.find(name);
        if (it == vars.end()) return std::nullopt;
        return it->second;
      };
      const auto path = url.path + tmpl::render(step.path_template, lookup);
      const auto body = step.body_template ? tmpl::render(*step.body_template, lookup) : std::string();

      auto result = send(client, step.method, path, body);
      state.counts[static_cast<std::size_t>(step.method)].fetch_add(1, std::memory_order_relaxed);
      if (!result) {
        if (first_request) {
          std::lock_guard lock(state.error_mutex);
          if (!state.aborted.exchange(true)) {
            state.abort_message = "group '" + group.name + "': " + std::string(to_string(step.method)) + " " + path +
                                  " failed: " + httplib::to_string(result.error());
          }
          return;
        }
        state.errors.fetch_add(1, std::memory_order_relaxed);
      } else {
        const bool ok = step.expected == StatusClass::any || (result->status >= 200 && result->status < 300);
        if (!ok) state.errors.fetch_add(1, std::memory_order_relaxed);
        if (ok && step.capture) {
          if (auto v = extract_field(result->body, step.capture->field_path)) {
            vars[step.capture->variable] = *v;
          } else {
            state.errors.fetch_add(1, std::memory_order_relaxed);
          }
        }
      }
      first_request = false;
      if (step.delay_ms > 0) std::this_thread::sleep_for(to_us(step.delay_ms / 1000.0));
    }
  }
}

} // namespace

HttpUrl parse_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw InvalidArgument("URL without scheme: '" + url + "'");
  const auto slash = url.find('/', scheme + 3);
  HttpUrl out;
  out.origin = url.substr(0, slash);
  if (out.origin.size() <= scheme + 3) throw InvalidArgument("URL without host: '" + url + "'");
  if (slash != std::string::npos) {
    out.path = url.substr(slash);
    while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
  }
  return out;
}

ProbeOutcome probe_ready(const ReadinessProbe& probe) {
  const auto url = parse_url(probe.url);
  const auto path = url.path.empty() ? std::string("/") : url.path;
  const auto t0 = Clock::now();
  ProbeOutcome outcome;
  const double per_request = std::max(0.05, std::min(probe.poll_interval_s, 5.0));
  while (true) {
    httplib::Client client(url.origin);
    configure(client, per_request);
    client.set_keep_alive(false);
    ++outcome.polls;
    auto res = client.Get(path);
    if (res && res->status == probe.expected_status) {
      outcome.ready = true;
      outcome.waited_s = seconds_since(t0);
      return outcome;
    }
    const double elapsed = seconds_since(t0);
    if (elapsed + probe.poll_interval_s > probe.timeout_s) {
      outcome.waited_s = elapsed;
      return outcome;
    }
    std::this_thread::sleep_for(to_us(probe.poll_interval_s));
  }
}

WorkloadSummary execute_plan(const TestPlan& plan, const std::string& base_url, const ExecuteOptions& options) {
  validate(plan);
  const auto url = parse_url(base_url);
  WorkloadSummary summary;
  summary.started_at = std::chrono::system_clock::now();
  const auto t0 = Clock::now();

  for (const auto& group : plan.groups) {
    GroupState state;
    {
      std::vector<std::jthread> workers;
      workers.reserve(static_cast<std::size_t>(group.workers));
      for (int w = 0; w < group.workers; ++w) {
        workers.emplace_back([&, w] { run_worker(group, w, url, options.request_timeout_s, state); });
      }
    }
    if (state.aborted) throw TransportError(state.abort_message);
    for (std::size_t m = 0; m < 4; ++m) summary.counts.by_method[m] += state.counts[m].load();
    summary.error_count += state.errors.load();
    spdlog::debug("group {} finished, {} errors so far", group.name, summary.error_count);
  }

  summary.wall_runtime_s = seconds_since(t0);
  summary.ended_at = std::chrono::system_clock::now();
  return summary;
}

} // namespace wattbench::workload
