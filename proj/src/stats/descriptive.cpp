#include "wattbench/stats/descriptive.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "wattbench/common/error.hpp"

namespace wattbench::stats {

namespace {

double sorted_quantile(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

} // namespace

double quantile(std::span<const double> values, double p) {
  if (values.empty()) throw InvalidArgument("quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("quantile: p must lie in [0, 1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted_quantile(sorted, p);
}

double median(std::span<const double> values) { return quantile(values, 0.5); }

double mean(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("mean: empty sample");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

QuartileSummary quartiles(std::span<const double> values) {
  if (values.size() < 4) {
    throw InvalidArgument("quartiles: need at least 4 values, got " + std::to_string(values.size()));
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  QuartileSummary s;
  s.q1 = sorted_quantile(sorted, 0.25);
  s.q3 = sorted_quantile(sorted, 0.75);
  s.iqr = s.q3 - s.q1;
  s.lower_fence = s.q1 - 1.5 * s.iqr;
  s.upper_fence = s.q3 + 1.5 * s.iqr;
  return s;
}

IqrPartition iqr_filter(std::span<const std::string> group_keys, std::span<const std::vector<double>> metrics) {
  for (const auto& m : metrics) {
    if (m.size() != group_keys.size()) throw InvalidArgument("iqr_filter: metric column length mismatch");
  }
  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < group_keys.size(); ++i) members[group_keys[i]].push_back(i);

  std::vector<bool> outlier(group_keys.size(), false);
  for (const auto& [key, idx] : members) {
    if (idx.size() < 4) {
      throw InvalidArgument("iqr_filter: group '" + key + "' has " + std::to_string(idx.size()) +
                            " records, need at least 4");
    }
    for (const auto& column : metrics) {
      std::vector<double> values;
      values.reserve(idx.size());
      for (auto i : idx) values.push_back(column[i]);
      const auto fences = quartiles(values);
      for (auto i : idx) {
        if (!fences.contains(column[i])) outlier[i] = true;
      }
    }
  }

  IqrPartition out;
  for (std::size_t i = 0; i < outlier.size(); ++i) (outlier[i] ? out.removed : out.kept).push_back(i);
  return out;
}

} // namespace wattbench::stats
