#include "wattbench/common/template.hpp"

#include <cctype>

namespace wattbench::tmpl {

namespace {

bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
}

// Length of the placeholder starting at text[pos] == '{', or 0.
std::size_t match(std::string_view text, std::size_t pos) {
  if (pos > 0 && text[pos - 1] == '$') return 0;
  std::size_t i = pos + 1;
  if (i >= text.size() || !name_start(text[i])) return 0;
  while (i < text.size() && name_char(text[i])) ++i;
  if (i >= text.size() || text[i] != '}') return 0;
  return i - pos + 1;
}

} // namespace

std::vector<std::string> placeholders(std::string_view text) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '{') continue;
    if (auto len = match(text, i)) {
      out.emplace_back(text.substr(i + 1, len - 2));
      i += len - 1;
    }
  }
  return out;
}

std::string render(std::string_view text, const std::function<std::optional<std::string>(const std::string&)>& lookup) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '{') {
      if (auto len = match(text, i)) {
        if (auto value = lookup(std::string(text.substr(i + 1, len - 2)))) {
          out += *value;
          i += len - 1;
          continue;
        }
      }
    }
    out += text[i];
  }
  return out;
}

} // namespace wattbench::tmpl
