#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wattbench/workload/test_plan.hpp"

namespace wattbench::orchestrator {

enum class RunStatus { ok, failed };

std::string_view to_string(RunStatus status);

/// Outcome of one benchmark run; one CSV row.
struct MeasurementRecord {
  std::string host;
  std::string config_id;
  std::vector<std::pair<std::string, std::string>> dimensions; ///< declaration order
  int iteration = 0;
  RunStatus status = RunStatus::ok;
  std::string reason; ///< empty when ok
  std::optional<double> joules;
  std::optional<double> runtime_s;
  workload::MethodCounts counts;
  std::uint64_t errors = 0;
  std::string started_at; ///< RFC 3339, UTC
  std::vector<std::pair<std::string, std::string>> extra; ///< unknown columns, kept verbatim

  const std::string& dimension(std::string_view name) const;
  friend bool operator==(const MeasurementRecord&, const MeasurementRecord&) = default;
};

/// Columns: host, config_id, <dimensions...>, iteration, status, reason,
/// joules, runtime_s, get, post, put, delete, errors, started_at, <extra...>.
std::vector<std::string> record_header(std::span<const std::string> dimension_names,
                                       std::span<const std::string> extra_columns = {});

struct RecordTable {
  std::vector<std::string> dimension_names;
  std::vector<std::string> extra_columns;
  std::vector<MeasurementRecord> records;
};

/// Throws RecordFormatError naming the 1-based file row (header = row 1).
RecordTable read_records(std::istream& in);
RecordTable load_records(const std::filesystem::path& path);
void write_records(std::ostream& out, const RecordTable& table);

/// Appends records to a CSV file, flushing after every row. Writes the
/// header when the file is new or empty.
class RecordWriter {
public:
  RecordWriter(const std::filesystem::path& path, std::vector<std::string> dimension_names,
               std::vector<std::string> extra_columns = {});
  void append(const MeasurementRecord& record);

private:
  std::ofstream out_;
  std::filesystem::path path_;
  std::vector<std::string> dimension_names_;
  std::vector<std::string> extra_columns_;
};

/// "YYYY-MM-DDTHH:MM:SS.mmmZ".
std::string format_rfc3339(std::chrono::system_clock::time_point t);

} // namespace wattbench::orchestrator
