#include "wattbench/matrix/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "../common/toml_util.hpp"
#include "wattbench/common/error.hpp"
#include "wattbench/common/template.hpp"

namespace wattbench::matrix {

namespace {

using namespace toml_util;

std::vector<Dimension> parse_dimensions(const toml::table& doc) {
  const auto* dims = table(doc, "dimensions");
  if (dims == nullptr || dims->empty()) throw ConfigError("experiment declares no [dimensions]");

  // toml++ tables iterate in key order; recover declaration order from the
  // source positions.
  std::vector<std::pair<std::size_t, Dimension>> ordered;
  for (const auto& [key, node] : *dims) {
    const auto name = std::string(key.str());
    if (!node.is_table()) fail(node, "dimensions." + name, "must be a table");
    const auto& t = *node.as_table();
    Dimension d;
    d.name = name;
    d.values = string_list(t, "values");
    if (d.values.empty()) throw ConfigError("dimension '" + name + "' has no values" + where(t));
    if (const auto* vars = table(t, "vars")) {
      for (const auto& [value, vnode] : *vars) {
        const auto label = std::string(value.str());
        if (!d.has_value(label)) fail(vnode, "dimensions." + name + ".vars", "names unknown value '" + label + "'");
        if (!vnode.is_table()) fail(vnode, "dimensions." + name + ".vars." + label, "must be a table");
        for (const auto& [var, val] : *vnode.as_table()) {
          if (!val.is_string()) fail(val, std::string(var.str()), "must be a string");
          d.variables[label][std::string(var.str())] = *val.value<std::string>();
        }
      }
    }
    ordered.emplace_back(node.source().begin.line * 100000 + node.source().begin.column, std::move(d));
  }
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Dimension> out;
  for (auto& [pos, d] : ordered) out.push_back(std::move(d));
  return out;
}

std::vector<CompatibilityRule> parse_rules(const toml::table& doc) {
  std::vector<CompatibilityRule> rules;
  const auto* arr = array(doc, "rules");
  if (arr == nullptr) return rules;
  for (const auto& node : *arr) {
    if (!node.is_table()) fail(node, "rules", "entries must be tables");
    const auto& t = *node.as_table();
    CompatibilityRule r;
    r.dimension_a = req_string(t, "dimension", "rule");
    const auto* v = t.get("value");
    if (v != nullptr && v->is_integer()) {
      r.value_a = std::to_string(*v->value<std::int64_t>());
    } else {
      r.value_a = req_string(t, "value", "rule");
    }
    r.dimension_b = req_string(t, "partner", "rule");
    r.allowed_values_b = string_list(t, "allowed");
    rules.push_back(std::move(r));
  }
  return rules;
}

orchestrator::RunLifecycle parse_lifecycle(const toml::table& doc, const toml::table* run) {
  orchestrator::RunLifecycle lc;
  if (const auto* t = table(doc, "lifecycle")) {
    lc.setup_commands = string_list(*t, "setup");
    lc.teardown_commands = string_list(*t, "teardown");
    lc.pidfile = opt_string(*t, "pidfile");
    if (const auto* r = table(*t, "readiness")) {
      workload::ReadinessProbe probe;
      probe.url = req_string(*r, "url", "lifecycle.readiness");
      probe.expected_status = static_cast<int>(opt_int(*r, "expected_status").value_or(200));
      probe.timeout_s = opt_number(*r, "timeout_s").value_or(probe.timeout_s);
      probe.poll_interval_s = opt_number(*r, "poll_interval_s").value_or(probe.poll_interval_s);
      if (probe.timeout_s <= 0 || probe.poll_interval_s <= 0) {
        throw ConfigError("lifecycle.readiness: timeout_s and poll_interval_s must be positive");
      }
      lc.readiness = probe;
    }
  }
  if (run != nullptr) {
    lc.cooldown_s = opt_number(*run, "cooldown_s").value_or(lc.cooldown_s);
    lc.max_retries = static_cast<int>(opt_int(*run, "max_retries").value_or(lc.max_retries));
    lc.error_rate_threshold = opt_number(*run, "error_rate_threshold").value_or(lc.error_rate_threshold);
    lc.include_startup = opt_bool(*run, "include_startup").value_or(lc.include_startup);
    if (auto ms = opt_number(*run, "sample_period_ms")) lc.sample_period_s = *ms / 1000.0;
  }
  if (lc.cooldown_s < 0) throw ConfigError("run.cooldown_s must be >= 0");
  if (lc.max_retries < 0) throw ConfigError("run.max_retries must be >= 0");
  if (lc.error_rate_threshold < 0 || lc.error_rate_threshold > 1) {
    throw ConfigError("run.error_rate_threshold must be within [0, 1]");
  }
  if (lc.sample_period_s < 0) throw ConfigError("run.sample_period_ms must be >= 0");
  return lc;
}

energy::EnergySourceDescriptor parse_energy(const toml::table& doc) {
  energy::EnergySourceDescriptor desc;
  const auto* t = table(doc, "energy");
  if (t == nullptr) throw ConfigError("experiment has no [energy] section");
  const auto kind = req_string(*t, "kind", "energy");
  if (kind == "rapl-sysfs") {
    desc.kind = energy::SourceKind::rapl_sysfs;
    for (const auto& p : string_list(*t, "counters")) desc.counter_paths.emplace_back(p);
    if (desc.counter_paths.empty()) desc.counter_paths.emplace_back("/sys/class/powercap/intel-rapl:0/energy_uj");
    if (auto root = opt_string(*t, "proc_root")) desc.proc_root = *root;
  } else if (kind == "simulated") {
    desc.kind = energy::SourceKind::simulated;
    auto& sim = desc.simulated;
    sim.base_power_w = opt_number(*t, "base_power_w").value_or(sim.base_power_w);
    sim.noise = opt_number(*t, "noise").value_or(sim.noise);
    sim.seed = static_cast<std::uint64_t>(opt_int(*t, "seed").value_or(0));
    sim.app_share = opt_number(*t, "app_share").value_or(sim.app_share);
    sim.cpus = static_cast<unsigned>(opt_int(*t, "cpus").value_or(sim.cpus));
    if (const auto* off = table(*t, "power_offsets_w")) {
      for (const auto& [id, node] : *off) {
        if (!node.is_number()) fail(node, std::string(id.str()), "must be a number");
        sim.power_offsets_w[std::string(id.str())] = *node.value<double>();
      }
    }
    if (sim.base_power_w < 0 || sim.noise < 0) throw ConfigError("energy: power and noise must be >= 0");
    if (sim.app_share < 0 || sim.app_share > 1) throw ConfigError("energy.app_share must be within [0, 1]");
    if (sim.cpus < 1) throw ConfigError("energy.cpus must be >= 1");
  } else {
    fail(*t->get("kind"), "kind", "must be \"rapl-sysfs\" or \"simulated\"");
  }
  return desc;
}

void check_templates(const Experiment& e) {
  const auto names = template_names(e);
  const std::set<std::string> known(names.begin(), names.end());
  auto check = [&](const std::string& text, const char* where_) {
    for (const auto& ref : tmpl::placeholders(text)) {
      if (known.count(ref) == 0) {
        throw ConfigError(std::string(where_) + " references unknown variable {" + ref + "}: " + text);
      }
    }
  };
  for (const auto& c : e.lifecycle.setup_commands) check(c, "lifecycle.setup");
  for (const auto& c : e.lifecycle.teardown_commands) check(c, "lifecycle.teardown");
  if (e.lifecycle.pidfile) check(*e.lifecycle.pidfile, "lifecycle.pidfile");
  if (e.lifecycle.readiness) check(e.lifecycle.readiness->url, "lifecycle.readiness.url");
  check(e.workload.base_url, "workload.base_url");
}

std::string env_name(std::string_view name) {
  std::string out = "STACK_";
  for (char c : name) out += std::isalnum(static_cast<unsigned char>(c)) ? static_cast<char>(std::toupper(c)) : '_';
  return out;
}

} // namespace

std::vector<std::string> template_names(const Experiment& experiment) {
  std::set<std::string> names{"config_id", "iteration"};
  for (const auto& d : experiment.dimensions) {
    names.insert(d.name);
    for (const auto& [value, vars] : d.variables) {
      for (const auto& [key, v] : vars) names.insert(key);
    }
  }
  return {names.begin(), names.end()};
}

std::map<std::string, std::string> substitutions(const Experiment& experiment, const StackConfig& config,
                                                 int iteration) {
  std::map<std::string, std::string> out;
  for (const auto& d : experiment.dimensions) {
    const auto& value = config.value(d.name);
    out[d.name] = value;
    for (const auto& [key, v] : d.variables_for(value)) out[key] = v;
  }
  out["config_id"] = config.id();
  out["iteration"] = std::to_string(iteration);
  return out;
}

std::vector<std::pair<std::string, std::string>> environment(const Experiment& experiment, const StackConfig& config,
                                                              int iteration) {
  std::vector<std::pair<std::string, std::string>> env;
  for (const auto& [key, value] : substitutions(experiment, config, iteration)) env.emplace_back(env_name(key), value);
  return env;
}

Experiment parse_experiment(std::string_view toml_text, std::string_view source_name,
                            const std::filesystem::path& base_dir) {
  const auto doc = parse(toml_text, source_name);
  Experiment e;
  e.name = opt_string(doc, "name").value_or(std::string(source_name));
  e.dimensions = parse_dimensions(doc);
  e.rules = parse_rules(doc);
  validate_matrix(e.dimensions, e.rules);

  const auto* run = table(doc, "run");
  if (run != nullptr) {
    e.iterations = static_cast<int>(opt_int(*run, "iterations").value_or(1));
    if (auto o = opt_string(*run, "ordering")) e.ordering = parse_ordering(*o);
    e.host = opt_string(*run, "host").value_or("");
  }
  if (e.iterations < 1) throw ConfigError("run.iterations must be >= 1");
  e.lifecycle = parse_lifecycle(doc, run);

  const auto* w = table(doc, "workload");
  if (w == nullptr) throw ConfigError("experiment has no [workload] section");
  const auto app = opt_string(*w, "app").value_or("external");
  if (app != "stub" && app != "external") fail(*w->get("app"), "app", "must be \"stub\" or \"external\"");
  e.workload.stub_app = app == "stub";
  e.workload.plan_path = req_string(*w, "plan", "workload");
  if (e.workload.plan_path.is_relative()) e.workload.plan_path = base_dir / e.workload.plan_path;
  e.workload.base_url = opt_string(*w, "base_url").value_or("");
  e.workload.sim_runtime_s = opt_number(*w, "sim_runtime_s").value_or(e.workload.sim_runtime_s);
  e.workload.sim_runtime_noise = opt_number(*w, "sim_runtime_noise").value_or(0.0);
  if (!e.workload.stub_app && e.workload.base_url.empty()) {
    throw ConfigError("workload.base_url is required unless app = \"stub\"");
  }
  if (e.workload.sim_runtime_s <= 0 || e.workload.sim_runtime_noise < 0) {
    throw ConfigError("workload.sim_runtime_s must be > 0 and sim_runtime_noise >= 0");
  }

  e.energy = parse_energy(doc);
  for (const auto& [id, offset] : e.energy.simulated.power_offsets_w) StackConfig::parse_id(id, e.dimensions);
  if (e.workload.stub_app && e.energy.kind != energy::SourceKind::simulated) {
    throw ConfigError("the stub application requires a simulated energy source");
  }
  check_templates(e);
  return e;
}

Experiment load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open experiment file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  auto e = parse_experiment(buf.str(), path.string(), path.parent_path());
  e.source_path = path;
  return e;
}

} // namespace wattbench::matrix
