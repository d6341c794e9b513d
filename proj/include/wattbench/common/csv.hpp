#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wattbench::csv {

using Row = std::vector<std::string>;

/// Quotes a field when it contains a separator, quote or line break.
std::string escape(std::string_view field);

/// Joins fields into one CSV line (without terminator).
std::string join(const Row& fields);

/// Reads the next logical record, honouring quoted fields that span
/// lines. Returns nullopt at end of input.
std::optional<Row> read_row(std::istream& in);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

/// Strict parse of a whole field as a finite double.
std::optional<double> parse_double(std::string_view text);

} // namespace wattbench::csv
