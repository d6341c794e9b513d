#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wattbench/orchestrator/record.hpp"
#include "wattbench/stats/stats.hpp"

namespace wattbench::report {

/// Tukey box: whiskers reach the most extreme values inside the 1.5 IQR
/// fences; anything beyond is listed as an outlier.
struct BoxplotStats {
  std::string label;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  std::size_t n = 0;
  std::vector<double> outliers;
};

/// Requires n >= 4.
BoxplotStats boxplot(std::string label, std::span<const double> values);

struct HeatmapCell {
  double delta = 0.0; ///< Cliff's delta of the row group against the column group
  double adjusted_p = 1.0;
  bool significant = false;
  bool shaded = false; ///< adjusted_p >= alpha
};

/// Square matrix over `labels`; the diagonal is empty.
struct EffectHeatmap {
  std::vector<std::string> labels;
  std::vector<std::vector<std::optional<HeatmapCell>>> cells;
};

/// Fills both triangles from one result per unordered pair. Throws
/// AnalysisError when a pair is missing or a label is unknown.
EffectHeatmap heatmap(std::span<const stats::PairwiseResult> pairwise, std::span<const std::string> labels,
                      double alpha = 0.05);

struct FootprintEstimate {
  double joules_per_run = 0.0;
  double runtime_s = 0.0;
  double duty_cycle = 1.0;
  double carbon_intensity_g_per_kwh = 0.0;
  double runs_per_day = 0.0;
  double energy_wh_per_day = 0.0;
  double energy_kwh_per_year = 0.0;
  double co2_kg_per_year = 0.0;
};

/// Continuous repetition of one run: runs/day = duty * 86400 / runtime,
/// Wh/day = joules * runs / 3600, kWh/yr = Wh/day * 365 / 1000,
/// kg/yr = kWh/yr * intensity / 1000.
FootprintEstimate extrapolate_footprint(double joules_per_run, double runtime_s, double duty_cycle,
                                        double carbon_intensity_g_per_kwh);

struct GroupSummary {
  std::string label;
  std::size_t n_input = 0;   ///< ok records before cleaning
  std::size_t n_removed = 0; ///< IQR outliers
  std::size_t n = 0;
  std::vector<double> values; ///< cleaned metric values
  std::vector<double> runtimes;
  std::optional<stats::NormalityResult> normality; ///< absent for constant samples
  double mean = 0.0;
};

struct CorrelationRow {
  std::string label; ///< group label, or "all" for the pooled sample
  std::optional<stats::CorrelationResult> result; ///< absent when undefined
};

/// Pseudo-dimension that groups by the full configuration id.
inline constexpr const char* kConfigGrouping = "config_id";

struct AnalysisOptions {
  double alpha = 0.05;
  double duty_cycle = 1.0;
  double carbon_intensity_g_per_kwh = 300.0;
  /// Group order; groups not listed follow in order of first appearance.
  std::vector<std::string> value_order;
};

struct AnalysisReport {
  std::string group_by;
  std::vector<std::pair<std::string, std::string>> fixed;
  double alpha = 0.05;
  std::string metric = "joules";
  std::vector<GroupSummary> groups;
  stats::OmnibusResult omnibus;
  std::vector<stats::PairwiseResult> pairwise;
  EffectHeatmap heatmap;
  std::vector<BoxplotStats> boxplots;
  std::vector<CorrelationRow> correlations; ///< runtime vs joules
  std::vector<std::pair<std::string, FootprintEstimate>> footprints;
};

/// ok rows matching `fixed` -> per-configuration IQR cleaning on joules and
/// runtime -> grouping by `group_by` -> normality, Kruskal-Wallis, Conover
/// with Holm adjustment, Cliff's delta, heatmap, boxplots, correlations and
/// footprints. Throws AnalysisError for fewer than 2 groups or a group
/// smaller than 4 after cleaning.
AnalysisReport analyze(std::span<const orchestrator::MeasurementRecord> records, const std::string& group_by,
                       const std::vector<std::pair<std::string, std::string>>& fixed,
                       const AnalysisOptions& options = {});

} // namespace wattbench::report
