#pragma once

// Typed accessors over toml++ nodes that report errors as ConfigError with
// the offending key and source line.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <toml.hpp>

#include "wattbench/common/error.hpp"

namespace wattbench::toml_util {

inline std::string where(const toml::node& node) {
  const auto& src = node.source();
  if (src.begin.line == 0) return {};
  return " (line " + std::to_string(src.begin.line) + ")";
}

inline toml::table parse(std::string_view text, std::string_view source_name) {
  try {
    return toml::parse(text, source_name);
  } catch (const toml::parse_error& e) {
    throw ParseError(std::string(source_name), e.source().begin.line, e.source().begin.column,
                     std::string(e.description()));
  }
}

[[noreturn]] inline void fail(const toml::node& node, const std::string& key, const std::string& what) {
  throw ConfigError("'" + key + "' " + what + where(node));
}

inline const toml::table* table(const toml::table& parent, std::string_view key) {
  const auto* n = parent.get(key);
  if (n == nullptr) return nullptr;
  if (!n->is_table()) fail(*n, std::string(key), "must be a table");
  return n->as_table();
}

inline const toml::array* array(const toml::table& parent, std::string_view key) {
  const auto* n = parent.get(key);
  if (n == nullptr) return nullptr;
  if (!n->is_array()) fail(*n, std::string(key), "must be an array");
  return n->as_array();
}

inline std::optional<std::string> opt_string(const toml::table& t, std::string_view key) {
  const auto* n = t.get(key);
  if (n == nullptr) return std::nullopt;
  if (auto v = n->value<std::string>(); v && n->is_string()) return *v;
  fail(*n, std::string(key), "must be a string");
}

inline std::string req_string(const toml::table& t, std::string_view key, std::string_view context) {
  auto v = opt_string(t, key);
  if (!v) throw ConfigError(std::string(context) + ": missing required key '" + std::string(key) + "'" + where(t));
  return *v;
}

inline std::optional<std::int64_t> opt_int(const toml::table& t, std::string_view key) {
  const auto* n = t.get(key);
  if (n == nullptr) return std::nullopt;
  if (!n->is_integer()) fail(*n, std::string(key), "must be an integer");
  return n->value<std::int64_t>();
}

inline std::optional<double> opt_number(const toml::table& t, std::string_view key) {
  const auto* n = t.get(key);
  if (n == nullptr) return std::nullopt;
  if (!n->is_number()) fail(*n, std::string(key), "must be a number");
  return n->value<double>();
}

inline std::optional<bool> opt_bool(const toml::table& t, std::string_view key) {
  const auto* n = t.get(key);
  if (n == nullptr) return std::nullopt;
  if (!n->is_boolean()) fail(*n, std::string(key), "must be a boolean");
  return n->value<bool>();
}

/// Array of strings; numbers are accepted and rendered as written
/// (so `values = [17, 21]` works for version-like labels).
inline std::vector<std::string> string_list(const toml::table& t, std::string_view key) {
  std::vector<std::string> out;
  const auto* arr = array(t, key);
  if (arr == nullptr) return out;
  for (const auto& item : *arr) {
    if (auto s = item.value<std::string>(); s && item.is_string()) {
      out.push_back(*s);
    } else if (item.is_integer()) {
      out.push_back(std::to_string(*item.value<std::int64_t>()));
    } else {
      fail(item, std::string(key), "must contain only strings");
    }
  }
  return out;
}

} // namespace wattbench::toml_util
