#include "wattbench/workload/test_plan.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "../common/toml_util.hpp"
#include "wattbench/common/error.hpp"
#include "wattbench/common/template.hpp"

namespace wattbench::workload {

std::string_view to_string(HttpMethod method) {
  switch (method) {
  case HttpMethod::get: return "GET";
  case HttpMethod::post: return "POST";
  case HttpMethod::put: return "PUT";
  case HttpMethod::del: return "DELETE";
  }
  return "GET";
}

HttpMethod parse_method(std::string_view text) {
  if (text == "GET") return HttpMethod::get;
  if (text == "POST") return HttpMethod::post;
  if (text == "PUT") return HttpMethod::put;
  if (text == "DELETE") return HttpMethod::del;
  throw ConfigError("unsupported HTTP method '" + std::string(text) + "'");
}

void validate(const TestPlan& plan) {
  if (plan.groups.empty()) throw ConfigError("test plan has no groups");
  std::set<std::string> names;
  for (const auto& g : plan.groups) {
    if (g.name.empty()) throw ConfigError("test plan group with empty name");
    if (!names.insert(g.name).second) throw ConfigError("duplicate group name '" + g.name + "'");
    if (g.workers < 1) throw ConfigError("group '" + g.name + "': workers must be at least 1");
    if (g.loops < 1) throw ConfigError("group '" + g.name + "': loops must be at least 1");
    if (g.steps.empty()) throw ConfigError("group '" + g.name + "' has no steps");

    std::set<std::string> captured;
    for (std::size_t i = 0; i < g.steps.size(); ++i) {
      const auto& step = g.steps[i];
      auto refs = tmpl::placeholders(step.path_template);
      if (step.body_template) {
        auto body_refs = tmpl::placeholders(*step.body_template);
        refs.insert(refs.end(), body_refs.begin(), body_refs.end());
      }
      for (const auto& ref : refs) {
        const bool builtin = std::find(kBuiltinVariables.begin(), kBuiltinVariables.end(), ref) != kBuiltinVariables.end();
        if (!builtin && captured.count(ref) == 0) {
          throw ConfigError("group '" + g.name + "' step " + std::to_string(i + 1) + " references {" + ref +
                            "} before it is captured");
        }
      }
      if (step.capture) {
        if (step.capture->variable.empty() || step.capture->field_path.empty()) {
          throw ConfigError("group '" + g.name + "' step " + std::to_string(i + 1) + ": incomplete capture");
        }
        captured.insert(step.capture->variable);
      }
    }
  }
}

TestPlan parse_test_plan(std::string_view toml_text, std::string_view source_name) {
  using namespace toml_util;
  const auto doc = parse(toml_text, source_name);
  TestPlan plan;
  plan.name = opt_string(doc, "name").value_or(std::string(source_name));
  plan.base_url_template = opt_string(doc, "base_url").value_or("");
  if (const auto* groups = array(doc, "groups")) {
    for (const auto& node : *groups) {
      if (!node.is_table()) fail(node, "groups", "entries must be tables");
      const auto& gt = *node.as_table();
      OperationGroup g;
      g.name = req_string(gt, "name", "group");
      g.workers = static_cast<int>(opt_int(gt, "workers").value_or(1));
      g.loops = static_cast<int>(opt_int(gt, "loops").value_or(1));
      if (const auto* steps = array(gt, "steps")) {
        for (const auto& sn : *steps) {
          if (!sn.is_table()) fail(sn, "steps", "entries must be tables");
          const auto& st = *sn.as_table();
          HttpStep step;
          step.method = parse_method(req_string(st, "method", "step"));
          step.path_template = req_string(st, "path", "step");
          step.body_template = opt_string(st, "body");
          const auto expect = opt_string(st, "expect").value_or("2xx");
          if (expect == "2xx") {
            step.expected = StatusClass::success;
          } else if (expect == "any") {
            step.expected = StatusClass::any;
          } else {
            fail(*st.get("expect"), "expect", "must be \"2xx\" or \"any\"");
          }
          if (const auto* cap = table(st, "capture")) {
            step.capture = Capture{req_string(*cap, "var", "capture"), req_string(*cap, "field", "capture")};
          }
          step.delay_ms = opt_number(st, "delay_ms").value_or(0.0);
          g.steps.push_back(std::move(step));
        }
      }
      plan.groups.push_back(std::move(g));
    }
  }
  validate(plan);
  return plan;
}

TestPlan load_test_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open test plan " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_test_plan(buf.str(), path.string());
}

MethodCounts total_requests(const TestPlan& plan) {
  MethodCounts counts;
  for (const auto& g : plan.groups) {
    const auto per_step = static_cast<std::uint64_t>(g.workers) * static_cast<std::uint64_t>(g.loops);
    for (const auto& s : g.steps) counts[s.method] += per_step;
  }
  return counts;
}

} // namespace wattbench::workload
