#pragma once

#include <cstddef>
#include <span>

namespace wattbench::stats {

struct CorrelationResult {
  double r = 0.0;
  double p_value = 1.0; ///< two-sided, Student t with n - 2 df
  std::size_t n = 0;
};

/// Pearson product-moment correlation. Requires equal lengths, n >= 3 and
/// both inputs nonconstant.
CorrelationResult pearson(std::span<const double> x, std::span<const double> y);

} // namespace wattbench::stats
