#include "wattbench/stats/correlation.hpp"

#include <algorithm>
#include <cmath>

#include "wattbench/common/error.hpp"
#include "wattbench/stats/distributions.hpp"

namespace wattbench::stats {

CorrelationResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("pearson: length mismatch");
  const std::size_t n = x.size();
  if (n < 3) throw InvalidArgument("pearson: need at least 3 pairs");

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw InvalidArgument("pearson: constant input");

  CorrelationResult res;
  res.n = n;
  res.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double one_minus_r2 = (1.0 - res.r) * (1.0 + res.r);
  if (one_minus_r2 <= 0.0) {
    res.p_value = 0.0;
  } else {
    const double df = static_cast<double>(n - 2);
    const double t = res.r * std::sqrt(df / one_minus_r2);
    res.p_value = student_t_two_sided(t, df);
  }
  return res;
}

} // namespace wattbench::stats
