#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wattbench::tmpl {

// `{name}` placeholders, name = [A-Za-z_][A-Za-z0-9_.-]*. A brace preceded
// by '$' (shell `${VAR}`) is left alone, as is anything that does not form
// a valid name (JSON objects).

std::vector<std::string> placeholders(std::string_view text);

/// Replaces every placeholder for which `lookup` returns a value; others are
/// kept verbatim.
std::string render(std::string_view text, const std::function<std::optional<std::string>(const std::string&)>& lookup);

} // namespace wattbench::tmpl
