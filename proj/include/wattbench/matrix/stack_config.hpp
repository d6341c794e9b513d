#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wattbench::matrix {

/// One independent variable of an experiment, e.g. the framework version.
struct Dimension {
  std::string name;
  std::vector<std::string> values; ///< report axes follow this order
  /// Per value: template key -> substitution string for lifecycle commands.
  std::map<std::string, std::map<std::string, std::string>> variables;

  const std::map<std::string, std::string>& variables_for(const std::string& value) const;
  bool has_value(std::string_view value) const;
};

/// Allow-list: when `dimension_a` takes `value_a`, `dimension_b` must take
/// one of `allowed_values_b`.
struct CompatibilityRule {
  std::string dimension_a;
  std::string value_a;
  std::string dimension_b;
  std::vector<std::string> allowed_values_b;
};

/// One point of the version / feature matrix.
class StackConfig {
public:
  using Assignment = std::pair<std::string, std::string>;

  StackConfig() = default;
  explicit StackConfig(std::vector<Assignment> assignments);

  /// Assignments in dimension declaration order.
  const std::vector<Assignment>& assignments() const noexcept { return assignments_; }
  const std::string& value(std::string_view dimension) const;

  /// "name=value" pairs joined with "_"; '/' and whitespace in values
  /// become '-'.
  const std::string& id() const noexcept { return id_; }

  /// Inverse of id() given the experiment's dimensions.
  static StackConfig parse_id(std::string_view id, std::span<const Dimension> dimensions);

  friend bool operator==(const StackConfig& a, const StackConfig& b) { return a.assignments_ == b.assignments_; }

private:
  std::vector<Assignment> assignments_;
  std::string id_;
};

/// Value label as it appears inside a config id.
std::string sanitize_label(std::string_view value);

bool admits(const CompatibilityRule& rule, const StackConfig& config);

/// Checks names, values and rule cross-references; throws ConfigError.
void validate_matrix(std::span<const Dimension> dimensions, std::span<const CompatibilityRule> rules);

/// Cartesian product of the dimension values (first dimension is the outer
/// loop) filtered by the rules.
std::vector<StackConfig> enumerate_configs(std::span<const Dimension> dimensions,
                                           std::span<const CompatibilityRule> rules);

} // namespace wattbench::matrix
