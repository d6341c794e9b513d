#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace wattbench::stats {

/// A labelled sample, e.g. all cleaned joule values of one stack
/// configuration.
struct SampleGroup {
  std::string label;
  std::vector<double> values;
};

struct OmnibusResult {
  double h_statistic = 0.0; ///< tie corrected
  std::size_t df = 0;       ///< k - 1
  double p_value = 1.0;
};

struct PairwiseResult {
  std::string label_a;
  std::string label_b;
  double t_statistic = 0.0; ///< Conover t, signed as mean rank a - mean rank b
  double raw_p = 1.0;
  double adjusted_p = 1.0;
  double cliffs_delta = 0.0; ///< delta(a, b)
  bool significant = false;
};

/// Kruskal-Wallis H over pooled midranks with the standard tie correction;
/// p from the chi-squared upper tail at k - 1 df. Requires k >= 2 nonempty
/// groups whose pooled values are not all identical.
OmnibusResult kruskal_wallis(std::span<const SampleGroup> groups);

/// Conover-Iman pairwise comparisons following a Kruskal-Wallis test on the
/// same groups. One result per pair (i, j), i < j, in that order; only the
/// t statistic and raw two-sided p (Student t, N - k df) are filled in,
/// adjusted_p is set equal to raw_p.
std::vector<PairwiseResult> conover_pairwise(std::span<const SampleGroup> groups, const OmnibusResult& omnibus);

/// Holm step-down adjustment. Output is in input order.
std::vector<double> holm_adjust(std::span<const double> p_values);

} // namespace wattbench::stats
