#pragma once

#include <cstddef>
#include <span>

namespace wattbench::stats {

struct NormalityResult {
  double w_statistic = 0.0;
  double p_value = 0.0;
  std::size_t n = 0;
};

/// Shapiro-Wilk W and p-value following Royston's AS R94 approximation,
/// valid for 3 <= n <= 5000. For n = 3 the coefficients and the p-value are
/// exact. Throws InvalidArgument for out-of-range n or zero-range data.
NormalityResult shapiro_wilk(std::span<const double> values);

} // namespace wattbench::stats
