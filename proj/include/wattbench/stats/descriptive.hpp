#pragma once

#include <span>
#include <string>
#include <vector>

namespace wattbench::stats {

/// First/third quartile and the 1.5 IQR outlier fences, in data units.
struct QuartileSummary {
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
  double lower_fence = 0.0;
  double upper_fence = 0.0;

  bool contains(double v) const noexcept { return v >= lower_fence && v <= upper_fence; }
};

/// Linear interpolation between order statistics at 0-based position
/// `p * (n - 1)` (the "type 7" convention). Requires a nonempty sample.
double quantile(std::span<const double> values, double p);

double median(std::span<const double> values);
double mean(std::span<const double> values);

/// Quartiles at positions 0.25(n-1) and 0.75(n-1). Requires n >= 4.
QuartileSummary quartiles(std::span<const double> values);

/// Indices into the record list, both ascending.
struct IqrPartition {
  std::vector<std::size_t> kept;
  std::vector<std::size_t> removed;
};

/// Single-pass 1.5 IQR cleaning. Record i belongs to group `group_keys[i]`
/// and has metric m value `metrics[m][i]`. Fences are computed per group and
/// per metric on the uncleaned data; a record is removed when any metric
/// falls outside its group's fences. Every group needs n >= 4.
IqrPartition iqr_filter(std::span<const std::string> group_keys, std::span<const std::vector<double>> metrics);

} // namespace wattbench::stats
