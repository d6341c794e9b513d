#include "wattbench/stats/effect_size.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

#include "wattbench/common/error.hpp"

namespace wattbench::stats {

double cliffs_delta(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("cliffs_delta: both samples must be nonempty");
  std::vector<double> xs(a.begin(), a.end());
  std::vector<double> ys(b.begin(), b.end());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());

  // Merge walk: for each x, `below` = #{y < x}, `not_above` = #{y <= x}.
  std::int64_t dominance = 0;
  std::size_t below = 0;
  std::size_t not_above = 0;
  const auto m = static_cast<std::int64_t>(ys.size());
  for (double x : xs) {
    while (below < ys.size() && ys[below] < x) ++below;
    if (not_above < below) not_above = below;
    while (not_above < ys.size() && ys[not_above] <= x) ++not_above;
    const auto greater_than_x = m - static_cast<std::int64_t>(not_above);
    dominance += static_cast<std::int64_t>(below) - greater_than_x;
  }
  return static_cast<double>(dominance) / (static_cast<double>(xs.size()) * static_cast<double>(ys.size()));
}

} // namespace wattbench::stats
