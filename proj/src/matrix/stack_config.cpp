#include "wattbench/matrix/stack_config.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "wattbench/common/error.hpp"

namespace wattbench::matrix {

const std::map<std::string, std::string>& Dimension::variables_for(const std::string& value) const {
  static const std::map<std::string, std::string> empty;
  auto it = variables.find(value);
  return it == variables.end() ? empty : it->second;
}

bool Dimension::has_value(std::string_view value) const {
  return std::find(values.begin(), values.end(), value) != values.end();
}

std::string sanitize_label(std::string_view value) {
  std::string out(value);
  for (char& c : out) {
    if (c == '/' || std::isspace(static_cast<unsigned char>(c))) c = '-';
  }
  return out;
}

StackConfig::StackConfig(std::vector<Assignment> assignments) : assignments_(std::move(assignments)) {
  for (std::size_t i = 0; i < assignments_.size(); ++i) {
    if (i != 0) id_ += '_';
    id_ += assignments_[i].first;
    id_ += '=';
    id_ += sanitize_label(assignments_[i].second);
  }
}

const std::string& StackConfig::value(std::string_view dimension) const {
  for (const auto& [name, value] : assignments_) {
    if (name == dimension) return value;
  }
  throw ConfigError("config " + id_ + " has no dimension '" + std::string(dimension) + "'");
}

StackConfig StackConfig::parse_id(std::string_view id, std::span<const Dimension> dimensions) {
  std::vector<Assignment> out;
  std::size_t pos = 0;
  for (std::size_t d = 0; d < dimensions.size(); ++d) {
    const std::string prefix = (d == 0 ? "" : "_") + dimensions[d].name + "=";
    if (id.substr(pos, prefix.size()) != prefix) {
      throw ConfigError("config id '" + std::string(id) + "' does not name dimension '" + dimensions[d].name + "'");
    }
    pos += prefix.size();
    std::size_t end = id.size();
    if (d + 1 < dimensions.size()) {
      end = id.find("_" + dimensions[d + 1].name + "=", pos);
      if (end == std::string_view::npos) {
        throw ConfigError("config id '" + std::string(id) + "' is missing dimension '" + dimensions[d + 1].name + "'");
      }
    }
    const auto label = id.substr(pos, end - pos);
    const auto& values = dimensions[d].values;
    auto it = std::find_if(values.begin(), values.end(), [&](const auto& v) { return sanitize_label(v) == label; });
    if (it == values.end()) {
      throw ConfigError("config id '" + std::string(id) + "': unknown value '" + std::string(label) + "' for '" +
                        dimensions[d].name + "'");
    }
    out.emplace_back(dimensions[d].name, *it);
    pos = end;
  }
  if (pos != id.size()) throw ConfigError("config id '" + std::string(id) + "' has trailing text");
  return StackConfig(std::move(out));
}

bool admits(const CompatibilityRule& rule, const StackConfig& config) {
  if (config.value(rule.dimension_a) != rule.value_a) return true;
  const auto& b = config.value(rule.dimension_b);
  return std::find(rule.allowed_values_b.begin(), rule.allowed_values_b.end(), b) != rule.allowed_values_b.end();
}

void validate_matrix(std::span<const Dimension> dimensions, std::span<const CompatibilityRule> rules) {
  if (dimensions.empty()) throw ConfigError("experiment declares no dimensions");
  std::set<std::string> names;
  for (const auto& dim : dimensions) {
    if (dim.name.empty()) throw ConfigError("dimension with empty name");
    if (!names.insert(dim.name).second) throw ConfigError("duplicate dimension name '" + dim.name + "'");
    if (dim.values.empty()) throw ConfigError("dimension '" + dim.name + "' has no values");
    std::set<std::string> labels;
    for (const auto& v : dim.values) {
      if (v.empty()) throw ConfigError("dimension '" + dim.name + "' has an empty value");
      if (!labels.insert(sanitize_label(v)).second) {
        throw ConfigError("dimension '" + dim.name + "' has duplicate value '" + v + "'");
      }
    }
    for (const auto& [value, vars] : dim.variables) {
      if (!dim.has_value(value)) {
        throw ConfigError("dimension '" + dim.name + "' defines variables for unknown value '" + value + "'");
      }
    }
  }
  const auto find = [&](const std::string& name) -> const Dimension* {
    for (const auto& d : dimensions) {
      if (d.name == name) return &d;
    }
    return nullptr;
  };
  for (const auto& rule : rules) {
    const auto* a = find(rule.dimension_a);
    if (a == nullptr) throw ConfigError("rule references unknown dimension '" + rule.dimension_a + "'");
    const auto* b = find(rule.dimension_b);
    if (b == nullptr) throw ConfigError("rule references unknown dimension '" + rule.dimension_b + "'");
    if (a == b) throw ConfigError("rule relates dimension '" + a->name + "' to itself");
    if (!a->has_value(rule.value_a)) {
      throw ConfigError("rule references unknown value '" + rule.value_a + "' of dimension '" + a->name + "'");
    }
    for (const auto& v : rule.allowed_values_b) {
      if (!b->has_value(v)) {
        throw ConfigError("rule references unknown value '" + v + "' of dimension '" + b->name + "'");
      }
    }
  }
}

std::vector<StackConfig> enumerate_configs(std::span<const Dimension> dimensions,
                                           std::span<const CompatibilityRule> rules) {
  std::vector<StackConfig> out;
  if (dimensions.empty()) return out;
  // odometer over value indices; the last dimension varies fastest
  std::vector<std::size_t> index(dimensions.size(), 0);
  while (true) {
    std::vector<StackConfig::Assignment> assignment;
    assignment.reserve(dimensions.size());
    for (std::size_t d = 0; d < dimensions.size(); ++d) {
      assignment.emplace_back(dimensions[d].name, dimensions[d].values[index[d]]);
    }
    StackConfig config(std::move(assignment));
    if (std::all_of(rules.begin(), rules.end(), [&](const auto& r) { return admits(r, config); })) {
      out.push_back(std::move(config));
    }
    std::size_t d = dimensions.size();
    while (d > 0) {
      --d;
      if (++index[d] < dimensions[d].values.size()) break;
      index[d] = 0;
      if (d == 0) return out;
    }
  }
}

} // namespace wattbench::matrix
