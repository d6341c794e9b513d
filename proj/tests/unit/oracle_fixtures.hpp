#pragma once

// Loader for the frozen statistics fixtures in tests/data/oracle.

#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "wattbench/common/csv.hpp"
#include "wattbench/stats/rank_tests.hpp"
#include "test_support.hpp"

namespace wattbench::fixtures {

/// Rows of a CSV fixture keyed by header name.
inline std::vector<std::map<std::string, std::string>> read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fixture " + path.string());
  auto header = csv::read_row(in);
  std::vector<std::map<std::string, std::string>> rows;
  while (auto row = csv::read_row(in)) {
    if (row->size() == 1 && row->front().empty()) continue;
    std::map<std::string, std::string> r;
    for (std::size_t i = 0; i < header->size() && i < row->size(); ++i) r[(*header)[i]] = (*row)[i];
    rows.push_back(std::move(r));
  }
  return rows;
}

inline double num(const std::map<std::string, std::string>& row, const std::string& key) {
  return std::stod(row.at(key));
}

struct OracleDataset {
  std::vector<stats::SampleGroup> groups;
  std::vector<double> x, y; // bivariate sample for correlation
};

inline std::vector<OracleDataset> load_oracle_datasets() {
  const auto dir = data_dir() / "oracle";
  std::vector<OracleDataset> out;
  for (const auto& row : read_table(dir / "datasets.csv")) {
    const auto d = static_cast<std::size_t>(std::stoul(row.at("dataset")));
    if (out.size() <= d) out.resize(d + 1);
    auto& groups = out[d].groups;
    if (groups.empty() || groups.back().label != row.at("group")) groups.push_back({row.at("group"), {}});
    groups.back().values.push_back(num(row, "value"));
  }
  for (const auto& row : read_table(dir / "pearson_data.csv")) {
    const auto d = static_cast<std::size_t>(std::stoul(row.at("dataset")));
    out.at(d).x.push_back(num(row, "x"));
    out.at(d).y.push_back(num(row, "y"));
  }
  return out;
}

} // namespace wattbench::fixtures
