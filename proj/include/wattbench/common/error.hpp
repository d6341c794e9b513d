#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wattbench {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent experiment / test-plan configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// A configuration document that does not parse. Carries the 1-based
/// position reported by the parser.
class ParseError : public ConfigError {
public:
  ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& what)
      : ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

/// An energy counter or CPU accounting file cannot be read.
class SourceUnavailable : public Error {
public:
  SourceUnavailable(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

/// A precondition on numeric input was violated (sample too small, values
/// out of range, degenerate data).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// The HTTP target could not be reached.
class TransportError : public Error {
public:
  using Error::Error;
};

/// File system failure while persisting or loading results.
class IoError : public Error {
public:
  using Error::Error;
};

/// A measurement CSV row that does not satisfy the record schema.
class RecordFormatError : public IoError {
public:
  RecordFormatError(std::size_t row, const std::string& what)
      : IoError("row " + std::to_string(row) + ": " + what), row_(row) {}

  std::size_t row() const noexcept { return row_; }

private:
  std::size_t row_;
};

/// The requested analysis cannot be carried out on the available data.
class AnalysisError : public Error {
public:
  using Error::Error;
};

} // namespace wattbench
