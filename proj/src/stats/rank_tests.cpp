#include "wattbench/stats/rank_tests.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wattbench/common/error.hpp"
#include "wattbench/stats/distributions.hpp"
#include "wattbench/stats/ranks.hpp"

namespace wattbench::stats {

namespace {

struct PooledRanks {
  std::vector<double> values;
  std::vector<double> ranks;
  std::vector<double> rank_sums;
  std::vector<double> sizes;
  double n = 0.0;
};

PooledRanks pool(std::span<const SampleGroup> groups) {
  if (groups.size() < 2) throw InvalidArgument("rank test: need at least 2 groups");
  PooledRanks p;
  for (const auto& g : groups) {
    if (g.values.empty()) throw InvalidArgument("rank test: group '" + g.label + "' is empty");
    for (double v : g.values) {
      if (!std::isfinite(v)) throw InvalidArgument("rank test: group '" + g.label + "' has a non-finite value");
    }
    p.values.insert(p.values.end(), g.values.begin(), g.values.end());
    p.sizes.push_back(static_cast<double>(g.values.size()));
  }
  p.n = static_cast<double>(p.values.size());
  p.ranks = midranks(p.values);
  std::size_t offset = 0;
  for (const auto& g : groups) {
    p.rank_sums.push_back(std::accumulate(p.ranks.begin() + offset, p.ranks.begin() + offset + g.values.size(), 0.0));
    offset += g.values.size();
  }
  return p;
}

} // namespace

OmnibusResult kruskal_wallis(std::span<const SampleGroup> groups) {
  const auto p = pool(groups);
  const double n = p.n;
  const double correction = 1.0 - tie_term(p.values) / (n * n * n - n);
  if (!(correction > 0.0)) throw InvalidArgument("kruskal_wallis: all values are identical");

  double sum = 0.0;
  for (std::size_t j = 0; j < groups.size(); ++j) sum += p.rank_sums[j] * p.rank_sums[j] / p.sizes[j];
  const double h = (12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0)) / correction;

  OmnibusResult r;
  r.h_statistic = std::max(h, 0.0);
  r.df = groups.size() - 1;
  r.p_value = chi_squared_sf(r.h_statistic, static_cast<double>(r.df));
  return r;
}

std::vector<PairwiseResult> conover_pairwise(std::span<const SampleGroup> groups, const OmnibusResult& omnibus) {
  const auto p = pool(groups);
  const double n = p.n;
  const double k = static_cast<double>(groups.size());
  if (n <= k) throw InvalidArgument("conover_pairwise: N must exceed the number of groups");
  if (omnibus.df + 1 != groups.size()) throw InvalidArgument("conover_pairwise: omnibus computed on other groups");

  // Sample variance of the pooled midranks.
  double sum_sq = 0.0;
  for (double r : p.ranks) sum_sq += r * r;
  const double s2 = (sum_sq - n * (n + 1.0) * (n + 1.0) / 4.0) / (n - 1.0);
  const double scale = s2 * (n - 1.0 - omnibus.h_statistic) / (n - k);
  const double df = n - k;

  std::vector<PairwiseResult> out;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    for (std::size_t j = i + 1; j < groups.size(); ++j) {
      PairwiseResult r;
      r.label_a = groups[i].label;
      r.label_b = groups[j].label;
      const double diff = p.rank_sums[i] / p.sizes[i] - p.rank_sums[j] / p.sizes[j];
      const double denom_sq = scale * (1.0 / p.sizes[i] + 1.0 / p.sizes[j]);
      if (diff == 0.0) {
        r.t_statistic = 0.0;
      } else if (!(denom_sq > 0.0)) {
        // groups perfectly separated with no within-group rank spread
        r.t_statistic = std::copysign(std::numeric_limits<double>::infinity(), diff);
      } else {
        r.t_statistic = diff / std::sqrt(denom_sq);
      }
      r.raw_p = student_t_two_sided(r.t_statistic, df);
      r.adjusted_p = r.raw_p;
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<double> holm_adjust(std::span<const double> p_values) {
  for (double v : p_values) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("holm_adjust: p-values must lie in [0, 1]");
  }
  const std::size_t m = p_values.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });

  std::vector<double> adjusted(m);
  double running = 0.0;
  for (std::size_t rank = 0; rank < m; ++rank) {
    const double scaled = static_cast<double>(m - rank) * p_values[order[rank]];
    running = std::max(running, std::min(1.0, scaled));
    adjusted[order[rank]] = running;
  }
  return adjusted;
}

} // namespace wattbench::stats
