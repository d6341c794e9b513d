#include "wattbench/report/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "wattbench/common/error.hpp"

namespace wattbench::report {

BoxplotStats boxplot(std::string label, std::span<const double> values) {
  const auto q = stats::quartiles(values);
  BoxplotStats b;
  b.label = std::move(label);
  b.q1 = q.q1;
  b.q3 = q.q3;
  b.median = stats::median(values);
  b.n = values.size();
  b.whisker_low = q.q1;
  b.whisker_high = q.q3;
  bool any_inside = false;
  for (double v : values) {
    if (!q.contains(v)) {
      b.outliers.push_back(v);
      continue;
    }
    if (!any_inside) {
      b.whisker_low = b.whisker_high = v;
      any_inside = true;
    }
    b.whisker_low = std::min(b.whisker_low, v);
    b.whisker_high = std::max(b.whisker_high, v);
  }
  // With interpolated quartiles the nearest inside value can fall past a
  // quartile (e.g. {0, 4, 4, 4}); keep whisker <= box.
  b.whisker_low = std::min(b.whisker_low, b.q1);
  b.whisker_high = std::max(b.whisker_high, b.q3);
  std::sort(b.outliers.begin(), b.outliers.end());
  return b;
}

EffectHeatmap heatmap(std::span<const stats::PairwiseResult> pairwise, std::span<const std::string> labels,
                      double alpha) {
  EffectHeatmap h;
  h.labels.assign(labels.begin(), labels.end());
  const auto k = labels.size();
  h.cells.assign(k, std::vector<std::optional<HeatmapCell>>(k));
  auto index = [&](const std::string& label) {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw AnalysisError("heatmap: unknown label '" + label + "'");
    return static_cast<std::size_t>(it - labels.begin());
  };
  for (const auto& p : pairwise) {
    const auto i = index(p.label_a);
    const auto j = index(p.label_b);
    if (i == j) throw AnalysisError("heatmap: pair compares '" + p.label_a + "' with itself");
    const bool shaded = !(p.adjusted_p < alpha);
    h.cells[i][j] = HeatmapCell{p.cliffs_delta, p.adjusted_p, !shaded, shaded};
    h.cells[j][i] = HeatmapCell{-p.cliffs_delta, p.adjusted_p, !shaded, shaded};
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i != j && !h.cells[i][j]) {
        throw AnalysisError("heatmap: missing pair '" + labels[i] + "' / '" + labels[j] + "'");
      }
    }
  }
  return h;
}

FootprintEstimate extrapolate_footprint(double joules_per_run, double runtime_s, double duty_cycle,
                                        double carbon_intensity_g_per_kwh) {
  if (!(runtime_s > 0)) throw InvalidArgument("footprint: runtime must be positive");
  if (!(duty_cycle > 0 && duty_cycle <= 1)) throw InvalidArgument("footprint: duty cycle must lie in (0, 1]");
  if (!(carbon_intensity_g_per_kwh >= 0)) throw InvalidArgument("footprint: carbon intensity must be >= 0");
  if (!(joules_per_run >= 0)) throw InvalidArgument("footprint: energy must be >= 0");
  FootprintEstimate f;
  f.joules_per_run = joules_per_run;
  f.runtime_s = runtime_s;
  f.duty_cycle = duty_cycle;
  f.carbon_intensity_g_per_kwh = carbon_intensity_g_per_kwh;
  f.runs_per_day = duty_cycle * 86400.0 / runtime_s;
  f.energy_wh_per_day = joules_per_run * f.runs_per_day / 3600.0;
  f.energy_kwh_per_year = f.energy_wh_per_day * 365.0 / 1000.0;
  f.co2_kg_per_year = f.energy_kwh_per_year * carbon_intensity_g_per_kwh / 1000.0;
  return f;
}

namespace {

std::string group_value(const orchestrator::MeasurementRecord& r, const std::string& group_by) {
  return group_by == kConfigGrouping ? r.config_id : r.dimension(group_by);
}

std::optional<stats::CorrelationResult> try_pearson(std::span<const double> x, std::span<const double> y) {
  try {
    return stats::pearson(x, y);
  } catch (const InvalidArgument&) {
    return std::nullopt;
  }
}

} // namespace

AnalysisReport analyze(std::span<const orchestrator::MeasurementRecord> records, const std::string& group_by,
                       const std::vector<std::pair<std::string, std::string>>& fixed, const AnalysisOptions& options) {
  if (!(options.alpha > 0 && options.alpha < 1)) throw InvalidArgument("alpha must lie in (0, 1)");

  std::vector<const orchestrator::MeasurementRecord*> rows;
  for (const auto& r : records) {
    if (r.status != orchestrator::RunStatus::ok) continue;
    bool match = true;
    for (const auto& [dim, value] : fixed) {
      if (std::none_of(r.dimensions.begin(), r.dimensions.end(), [&](const auto& kv) { return kv.first == dim; })) {
        throw AnalysisError("unknown dimension '" + dim + "' in fixed assignment");
      }
      if (r.dimension(dim) != value) match = false;
    }
    if (match) rows.push_back(&r);
  }
  if (group_by != kConfigGrouping) {
    for (const auto* r : rows) {
      if (std::none_of(r->dimensions.begin(), r->dimensions.end(),
                       [&](const auto& kv) { return kv.first == group_by; })) {
        throw AnalysisError("unknown grouping dimension '" + group_by + "'");
      }
    }
  }

  std::vector<std::string> order;
  for (const auto& v : options.value_order) {
    if (std::any_of(rows.begin(), rows.end(), [&](const auto* r) { return group_value(*r, group_by) == v; })) {
      order.push_back(v);
    }
  }
  for (const auto* r : rows) {
    auto g = group_value(*r, group_by);
    if (std::find(order.begin(), order.end(), g) == order.end()) order.push_back(std::move(g));
  }
  if (order.size() < 2) {
    throw AnalysisError("need at least 2 groups for '" + group_by + "', found " + std::to_string(order.size()));
  }

  // Outliers are judged within each configuration before pooling.
  std::vector<std::string> keys;
  std::vector<std::vector<double>> metrics(2);
  for (const auto* r : rows) {
    keys.push_back(r->config_id);
    metrics[0].push_back(*r->joules);
    metrics[1].push_back(*r->runtime_s);
  }
  stats::IqrPartition part;
  try {
    part = stats::iqr_filter(keys, metrics);
  } catch (const InvalidArgument& e) {
    throw AnalysisError(std::string("too few runs to clean: ") + e.what());
  }

  AnalysisReport rep;
  rep.group_by = group_by;
  rep.fixed = fixed;
  rep.alpha = options.alpha;
  for (const auto& label : order) {
    GroupSummary g;
    g.label = label;
    rep.groups.push_back(std::move(g));
  }
  auto group_index = [&](const orchestrator::MeasurementRecord& r) {
    return static_cast<std::size_t>(std::find(order.begin(), order.end(), group_value(r, group_by)) - order.begin());
  };
  for (const auto* r : rows) ++rep.groups[group_index(*r)].n_input;
  for (auto i : part.kept) {
    auto& g = rep.groups[group_index(*rows[i])];
    g.values.push_back(*rows[i]->joules);
    g.runtimes.push_back(*rows[i]->runtime_s);
  }

  std::vector<stats::SampleGroup> samples;
  for (auto& g : rep.groups) {
    g.n = g.values.size();
    g.n_removed = g.n_input - g.n;
    if (g.n < 4) {
      throw AnalysisError("group '" + g.label + "' has " + std::to_string(g.n) + " runs after cleaning; need 4");
    }
    g.mean = stats::mean(g.values);
    try {
      g.normality = stats::shapiro_wilk(g.values);
    } catch (const InvalidArgument&) {
      g.normality.reset();
    }
    samples.push_back({g.label, g.values});
    rep.boxplots.push_back(boxplot(g.label, g.values));
    rep.correlations.push_back({g.label, try_pearson(g.runtimes, g.values)});
    rep.footprints.emplace_back(g.label, extrapolate_footprint(g.mean, stats::mean(g.runtimes), options.duty_cycle,
                                                               options.carbon_intensity_g_per_kwh));
  }
  {
    std::vector<double> all_x, all_y;
    for (const auto& g : rep.groups) {
      all_x.insert(all_x.end(), g.runtimes.begin(), g.runtimes.end());
      all_y.insert(all_y.end(), g.values.begin(), g.values.end());
    }
    rep.correlations.push_back({"all", try_pearson(all_x, all_y)});
  }

  try {
    rep.omnibus = stats::kruskal_wallis(samples);
    rep.pairwise = stats::conover_pairwise(samples, rep.omnibus);
  } catch (const InvalidArgument& e) {
    throw AnalysisError(e.what());
  }
  std::vector<double> raw;
  for (const auto& p : rep.pairwise) raw.push_back(p.raw_p);
  const auto adjusted = stats::holm_adjust(raw);
  for (std::size_t i = 0; i < rep.pairwise.size(); ++i) {
    auto& p = rep.pairwise[i];
    p.adjusted_p = adjusted[i];
    p.significant = p.adjusted_p < options.alpha;
    const auto& a = *std::find_if(samples.begin(), samples.end(), [&](const auto& s) { return s.label == p.label_a; });
    const auto& b = *std::find_if(samples.begin(), samples.end(), [&](const auto& s) { return s.label == p.label_b; });
    p.cliffs_delta = stats::cliffs_delta(a.values, b.values);
  }
  rep.heatmap = heatmap(rep.pairwise, order, options.alpha);
  return rep;
}

} // namespace wattbench::report
