#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wattbench/report/analysis.hpp"

namespace wattbench::report {

enum class Format { json, csv, svg };

/// Comma-separated list, e.g. "json,svg".
std::set<Format> parse_formats(std::string_view text);

/// Versioned JSON document (`"schema": 1`) holding the whole report.
std::string report_json(const AnalysisReport& report);

/// pair,group_a,group_b,t,raw_p,adjusted_p,cliffs_delta,significant
std::string pairwise_csv(const AnalysisReport& report);

/// group,n_input,n_removed,n,median,q1,q3,whisker_low,whisker_high,mean
std::string boxplot_csv(const AnalysisReport& report);

/// Delta colour scale: green at -1, yellow at 0, red at +1. Non-significant
/// cells carry a hatch overlay.
std::string heatmap_svg(const EffectHeatmap& heatmap, std::string_view title);

std::string boxplot_svg(const std::vector<BoxplotStats>& boxes, std::string_view title, std::string_view axis_label);

/// "#rrggbb" for a delta in [-1, 1].
std::string delta_colour(double delta);

/// Writes the requested formats into `out_dir` (created if needed) and
/// returns the files written: report.json; pairwise.csv and boxplot.csv;
/// boxplot.svg and heatmap.svg. Throws IoError when a file cannot be
/// written.
std::vector<std::filesystem::path> render(const AnalysisReport& report, const std::set<Format>& formats,
                                          const std::filesystem::path& out_dir);

/// Plain-text pairwise table for terminals.
std::string summary_table(const AnalysisReport& report);

} // namespace wattbench::report
