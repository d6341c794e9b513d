#include "wattbench/orchestrator/record.hpp"

#include <algorithm>
#include <charconv>
#include <ctime>
#include <map>
#include <set>

#include "wattbench/common/csv.hpp"
#include "wattbench/common/error.hpp"

namespace wattbench::orchestrator {

namespace {

const std::vector<std::string> kLeading = {"host", "config_id"};
const std::vector<std::string> kTrailing = {"iteration", "status", "reason", "joules",  "runtime_s",
                                            "get",       "post",   "put",    "delete",  "errors",
                                            "started_at"};

std::string optional_number(const std::optional<double>& v) { return v ? csv::format_double(*v) : std::string(); }

template <typename T>
T parse_integer(std::string_view text, std::size_t row, std::string_view column) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw RecordFormatError(row, "column '" + std::string(column) + "' is not an integer: '" + std::string(text) + "'");
  }
  return value;
}

} // namespace

std::string_view to_string(RunStatus status) { return status == RunStatus::ok ? "ok" : "failed"; }

const std::string& MeasurementRecord::dimension(std::string_view name) const {
  for (const auto& [k, v] : dimensions) {
    if (k == name) return v;
  }
  throw InvalidArgument("record has no dimension '" + std::string(name) + "'");
}

std::vector<std::string> record_header(std::span<const std::string> dimension_names,
                                       std::span<const std::string> extra_columns) {
  std::vector<std::string> h = kLeading;
  h.insert(h.end(), dimension_names.begin(), dimension_names.end());
  h.insert(h.end(), kTrailing.begin(), kTrailing.end());
  h.insert(h.end(), extra_columns.begin(), extra_columns.end());
  return h;
}

namespace {

csv::Row to_row(const MeasurementRecord& r, std::span<const std::string> dims, std::span<const std::string> extra) {
  csv::Row row{r.host, r.config_id};
  for (const auto& d : dims) row.push_back(r.dimension(d));
  row.push_back(std::to_string(r.iteration));
  row.emplace_back(to_string(r.status));
  row.push_back(r.reason);
  row.push_back(optional_number(r.joules));
  row.push_back(optional_number(r.runtime_s));
  for (auto c : r.counts.by_method) row.push_back(std::to_string(c));
  row.push_back(std::to_string(r.errors));
  row.push_back(r.started_at);
  for (const auto& col : extra) {
    auto it = std::find_if(r.extra.begin(), r.extra.end(), [&](const auto& kv) { return kv.first == col; });
    row.push_back(it == r.extra.end() ? std::string() : it->second);
  }
  return row;
}

} // namespace

RecordTable read_records(std::istream& in) {
  RecordTable table;
  auto header = csv::read_row(in);
  if (!header) throw RecordFormatError(1, "missing header");
  const auto& h = *header;

  auto index_of = [&](const std::string& name) -> std::size_t {
    auto it = std::find(h.begin(), h.end(), name);
    if (it == h.end()) throw RecordFormatError(1, "missing column '" + name + "'");
    return static_cast<std::size_t>(it - h.begin());
  };
  std::map<std::string, std::size_t> col;
  for (const auto& name : kLeading) col[name] = index_of(name);
  for (const auto& name : kTrailing) col[name] = index_of(name);
  if (col["config_id"] >= col["iteration"]) throw RecordFormatError(1, "'iteration' must follow 'config_id'");
  const std::set<std::string> known = [&] {
    std::set<std::string> s(kLeading.begin(), kLeading.end());
    s.insert(kTrailing.begin(), kTrailing.end());
    return s;
  }();
  for (std::size_t i = col["config_id"] + 1; i < col["iteration"]; ++i) {
    if (known.count(h[i])) throw RecordFormatError(1, "unexpected column order near '" + h[i] + "'");
    table.dimension_names.push_back(h[i]);
  }
  std::vector<std::size_t> extra_idx;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (known.count(h[i]) || (i > col["config_id"] && i < col["iteration"])) continue;
    table.extra_columns.push_back(h[i]);
    extra_idx.push_back(i);
  }
  {
    std::set<std::string> seen;
    for (const auto& name : h) {
      if (!seen.insert(name).second) throw RecordFormatError(1, "duplicate column '" + name + "'");
    }
  }

  std::size_t row_no = 1;
  while (auto fields = csv::read_row(in)) {
    ++row_no;
    if (fields->size() == 1 && (*fields)[0].empty()) continue;
    if (fields->size() != h.size()) {
      throw RecordFormatError(row_no, "expected " + std::to_string(h.size()) + " fields, found " +
                                          std::to_string(fields->size()));
    }
    const auto& f = *fields;
    MeasurementRecord r;
    r.host = f[col["host"]];
    r.config_id = f[col["config_id"]];
    for (std::size_t i = 0; i < table.dimension_names.size(); ++i) {
      r.dimensions.emplace_back(table.dimension_names[i], f[col["config_id"] + 1 + i]);
    }
    r.iteration = parse_integer<int>(f[col["iteration"]], row_no, "iteration");
    const auto& status = f[col["status"]];
    if (status == "ok") {
      r.status = RunStatus::ok;
    } else if (status == "failed") {
      r.status = RunStatus::failed;
    } else {
      throw RecordFormatError(row_no, "unknown status '" + status + "'");
    }
    r.reason = f[col["reason"]];
    for (const char* name : {"joules", "runtime_s"}) {
      const auto& text = f[col[name]];
      if (text.empty()) continue;
      auto v = csv::parse_double(text);
      if (!v) throw RecordFormatError(row_no, std::string("column '") + name + "' is not a number: '" + text + "'");
      (std::string_view(name) == "joules" ? r.joules : r.runtime_s) = *v;
    }
    const char* methods[] = {"get", "post", "put", "delete"};
    for (std::size_t m = 0; m < 4; ++m) {
      r.counts.by_method[m] = parse_integer<std::uint64_t>(f[col[methods[m]]], row_no, methods[m]);
    }
    r.errors = parse_integer<std::uint64_t>(f[col["errors"]], row_no, "errors");
    r.started_at = f[col["started_at"]];
    for (std::size_t i = 0; i < extra_idx.size(); ++i) r.extra.emplace_back(table.extra_columns[i], f[extra_idx[i]]);

    if (r.status == RunStatus::ok) {
      if (!r.joules || *r.joules < 0) throw RecordFormatError(row_no, "ok row without non-negative joules");
      if (!r.runtime_s || *r.runtime_s <= 0) throw RecordFormatError(row_no, "ok row without positive runtime_s");
    } else if (r.reason.empty()) {
      throw RecordFormatError(row_no, "failed row without reason");
    }
    table.records.push_back(std::move(r));
  }
  return table;
}

RecordTable load_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_records(in);
}

void write_records(std::ostream& out, const RecordTable& table) {
  out << csv::join(record_header(table.dimension_names, table.extra_columns)) << '\n';
  for (const auto& r : table.records) out << csv::join(to_row(r, table.dimension_names, table.extra_columns)) << '\n';
}

RecordWriter::RecordWriter(const std::filesystem::path& path, std::vector<std::string> dimension_names,
                           std::vector<std::string> extra_columns)
    : path_(path), dimension_names_(std::move(dimension_names)), extra_columns_(std::move(extra_columns)) {
  std::error_code ec;
  const bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  out_.open(path, std::ios::app);
  if (!out_) throw IoError("cannot open " + path.string() + " for writing");
  if (fresh) {
    out_ << csv::join(record_header(dimension_names_, extra_columns_)) << '\n';
    out_.flush();
  }
}

void RecordWriter::append(const MeasurementRecord& record) {
  out_ << csv::join(to_row(record, dimension_names_, extra_columns_)) << '\n';
  out_.flush();
  if (!out_) throw IoError("write to " + path_.string() + " failed");
}

std::string format_rfc3339(std::chrono::system_clock::time_point t) {
  using namespace std::chrono;
  const auto ms = duration_cast<milliseconds>(t.time_since_epoch()).count();
  auto secs = static_cast<std::time_t>(ms / 1000);
  auto frac = ms % 1000;
  if (frac < 0) {
    frac += 1000;
    --secs;
  }
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(frac));
  return buf;
}

} // namespace wattbench::orchestrator
