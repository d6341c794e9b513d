#include "wattbench/report/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wattbench/common/csv.hpp"
#include "wattbench/common/error.hpp"

namespace wattbench::report {

namespace {

using nlohmann::json;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string general(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: out += c;
    }
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw IoError("cannot write " + path.string());
}

} // namespace

std::set<Format> parse_formats(std::string_view text) {
  std::set<Format> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    auto item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    if (item == "json") {
      out.insert(Format::json);
    } else if (item == "csv") {
      out.insert(Format::csv);
    } else if (item == "svg") {
      out.insert(Format::svg);
    } else {
      throw ConfigError("unknown format '" + std::string(item) + "' (expected json, csv or svg)");
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string report_json(const AnalysisReport& r) {
  json doc;
  doc["schema"] = 1;
  doc["group_by"] = r.group_by;
  doc["fixed"] = json::object();
  for (const auto& [k, v] : r.fixed) doc["fixed"][k] = v;
  doc["alpha"] = r.alpha;
  doc["metric"] = r.metric;

  doc["groups"] = json::array();
  for (const auto& g : r.groups) {
    json j{{"label", g.label}, {"n_input", g.n_input}, {"n_removed", g.n_removed}, {"n", g.n}, {"mean", g.mean}};
    j["normality"] = g.normality ? json{{"w", g.normality->w_statistic}, {"p", g.normality->p_value}} : json(nullptr);
    doc["groups"].push_back(std::move(j));
  }
  doc["omnibus"] = {{"test", "kruskal-wallis"},
                    {"h", r.omnibus.h_statistic},
                    {"df", r.omnibus.df},
                    {"p", r.omnibus.p_value}};
  doc["pairwise"] = json::array();
  for (const auto& p : r.pairwise) {
    doc["pairwise"].push_back({{"a", p.label_a},
                               {"b", p.label_b},
                               {"t", number(p.t_statistic)},
                               {"raw_p", p.raw_p},
                               {"adjusted_p", p.adjusted_p},
                               {"cliffs_delta", p.cliffs_delta},
                               {"significant", p.significant}});
  }
  json cells = json::array();
  for (const auto& row : r.heatmap.cells) {
    json jr = json::array();
    for (const auto& c : row) {
      jr.push_back(c ? json{{"delta", c->delta}, {"adjusted_p", c->adjusted_p}, {"significant", c->significant},
                            {"shaded", c->shaded}}
                     : json(nullptr));
    }
    cells.push_back(std::move(jr));
  }
  doc["heatmap"] = {{"labels", r.heatmap.labels}, {"cells", std::move(cells)}};
  doc["boxplots"] = json::array();
  for (const auto& b : r.boxplots) {
    doc["boxplots"].push_back({{"label", b.label},
                               {"n", b.n},
                               {"median", b.median},
                               {"q1", b.q1},
                               {"q3", b.q3},
                               {"whisker_low", b.whisker_low},
                               {"whisker_high", b.whisker_high},
                               {"outliers", b.outliers}});
  }
  doc["correlations"] = json::array();
  for (const auto& c : r.correlations) {
    json j{{"label", c.label}, {"x", "runtime_s"}, {"y", r.metric}};
    if (c.result) {
      j["r"] = c.result->r;
      j["p"] = c.result->p_value;
      j["n"] = c.result->n;
    } else {
      j["r"] = nullptr;
      j["p"] = nullptr;
    }
    doc["correlations"].push_back(std::move(j));
  }
  doc["footprints"] = json::array();
  for (const auto& [label, f] : r.footprints) {
    doc["footprints"].push_back({{"label", label},
                                 {"joules_per_run", f.joules_per_run},
                                 {"runtime_s", f.runtime_s},
                                 {"duty_cycle", f.duty_cycle},
                                 {"carbon_intensity_g_per_kwh", f.carbon_intensity_g_per_kwh},
                                 {"runs_per_day", f.runs_per_day},
                                 {"energy_wh_per_day", f.energy_wh_per_day},
                                 {"energy_kwh_per_year", f.energy_kwh_per_year},
                                 {"co2_kg_per_year", f.co2_kg_per_year}});
  }
  return doc.dump(2) + "\n";
}

std::string pairwise_csv(const AnalysisReport& r) {
  std::string out = "pair,group_a,group_b,t,raw_p,adjusted_p,cliffs_delta,significant\n";
  for (const auto& p : r.pairwise) {
    out += csv::join({p.label_a + " vs " + p.label_b, p.label_a, p.label_b,
                      std::isfinite(p.t_statistic) ? csv::format_double(p.t_statistic) : std::string("inf"),
                      csv::format_double(p.raw_p), csv::format_double(p.adjusted_p),
                      csv::format_double(p.cliffs_delta), p.significant ? "true" : "false"});
    out += '\n';
  }
  return out;
}

std::string boxplot_csv(const AnalysisReport& r) {
  std::string out = "group,n_input,n_removed,n,median,q1,q3,whisker_low,whisker_high,mean\n";
  for (std::size_t i = 0; i < r.boxplots.size(); ++i) {
    const auto& b = r.boxplots[i];
    const auto& g = r.groups[i];
    out += csv::join({b.label, std::to_string(g.n_input), std::to_string(g.n_removed), std::to_string(b.n),
                      csv::format_double(b.median), csv::format_double(b.q1), csv::format_double(b.q3),
                      csv::format_double(b.whisker_low), csv::format_double(b.whisker_high),
                      csv::format_double(g.mean)});
    out += '\n';
  }
  return out;
}

std::string delta_colour(double delta) {
  struct Rgb {
    double r, g, b;
  };
  constexpr Rgb green{0x1a, 0x98, 0x50}, yellow{0xff, 0xff, 0xbf}, red{0xd7, 0x30, 0x27};
  const double d = std::clamp(delta, -1.0, 1.0);
  const Rgb& from = d < 0 ? green : yellow;
  const Rgb& to = d < 0 ? yellow : red;
  const double t = d < 0 ? d + 1.0 : d;
  auto mix = [t](double a, double b) { return static_cast<int>(std::lround(a + (b - a) * t)); };
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", mix(from.r, to.r), mix(from.g, to.g), mix(from.b, to.b));
  return buf;
}

std::string heatmap_svg(const EffectHeatmap& h, std::string_view title) {
  const int cell = 64;
  const int margin_left = 140;
  const int margin_top = 120;
  const int k = static_cast<int>(h.labels.size());
  const int width = margin_left + k * cell + 20;
  const int height = margin_top + k * cell + 20;

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "  <defs>\n"
    << "    <pattern id=\"hatch\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\" "
       "patternTransform=\"rotate(45)\">\n"
    << "      <rect width=\"6\" height=\"6\" fill=\"#ffffff\" fill-opacity=\"0.55\"/>\n"
    << "      <line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#808080\" stroke-width=\"2\"/>\n"
    << "    </pattern>\n"
    << "  </defs>\n"
    << "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n"
    << "  <text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << xml_escape(title)
    << "</text>\n";
  for (int i = 0; i < k; ++i) {
    const int cx = margin_left + i * cell + cell / 2;
    const int cy = margin_top + i * cell + cell / 2;
    s << "  <text x=\"" << margin_left - 8 << "\" y=\"" << cy + 4 << "\" text-anchor=\"end\">"
      << xml_escape(h.labels[static_cast<std::size_t>(i)]) << "</text>\n";
    s << "  <text x=\"" << cx << "\" y=\"" << margin_top - 8 << "\" text-anchor=\"start\" transform=\"rotate(-45 "
      << cx << " " << margin_top - 8 << ")\">" << xml_escape(h.labels[static_cast<std::size_t>(i)]) << "</text>\n";
  }
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const int x = margin_left + j * cell;
      const int y = margin_top + i * cell;
      const auto& c = h.cells[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (!c) {
        s << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell
          << "\" fill=\"#f0f0f0\" stroke=\"#ffffff\"/>\n";
        continue;
      }
      s << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\""
        << delta_colour(c->delta) << "\" stroke=\"#ffffff\"/>\n";
      if (c->shaded) {
        s << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell
          << "\" fill=\"url(#hatch)\" class=\"shaded\"/>\n";
      }
      s << "  <text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4 << "\" text-anchor=\"middle\""
        << (c->significant ? " font-weight=\"bold\"" : "") << ">" << fixed(c->delta, 2) << "</text>\n";
    }
  }
  s << "</svg>\n";
  return s.str();
}

std::string boxplot_svg(const std::vector<BoxplotStats>& boxes, std::string_view title, std::string_view axis_label) {
  const int slot = 80;
  const int margin_left = 80;
  const int margin_top = 40;
  const int plot_h = 300;
  const int margin_bottom = 110;
  const int n = static_cast<int>(boxes.size());
  const int width = margin_left + std::max(n, 1) * slot + 20;
  const int height = margin_top + plot_h + margin_bottom;

  double lo = 0, hi = 1;
  bool first = true;
  for (const auto& b : boxes) {
    double bl = b.whisker_low, bh = b.whisker_high;
    for (double o : b.outliers) {
      bl = std::min(bl, o);
      bh = std::max(bh, o);
    }
    lo = first ? bl : std::min(lo, bl);
    hi = first ? bh : std::max(hi, bh);
    first = false;
  }
  if (hi <= lo) {
    hi = lo + 1;
    lo -= 1;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  auto y_of = [&](double v) { return margin_top + plot_h * (hi - v) / (hi - lo); };

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n"
    << "  <text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << xml_escape(title)
    << "</text>\n"
    << "  <line x1=\"" << margin_left << "\" y1=\"" << margin_top << "\" x2=\"" << margin_left << "\" y2=\""
    << margin_top + plot_h << "\" stroke=\"#000000\"/>\n"
    << "  <text x=\"16\" y=\"" << margin_top + plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << margin_top + plot_h / 2 << ")\">" << xml_escape(axis_label) << "</text>\n";
  for (int t = 0; t <= 5; ++t) {
    const double v = lo + (hi - lo) * t / 5.0;
    const double y = y_of(v);
    s << "  <line x1=\"" << margin_left - 4 << "\" y1=\"" << fixed(y, 1) << "\" x2=\"" << margin_left << "\" y2=\""
      << fixed(y, 1) << "\" stroke=\"#000000\"/>\n"
      << "  <text x=\"" << margin_left - 6 << "\" y=\"" << fixed(y + 4, 1) << "\" text-anchor=\"end\">" << general(v)
      << "</text>\n";
  }
  for (int i = 0; i < n; ++i) {
    const auto& b = boxes[static_cast<std::size_t>(i)];
    const double cx = margin_left + slot * (i + 0.5);
    const double half = slot * 0.3;
    const auto x0 = fixed(cx - half, 1), x1 = fixed(cx + half, 1), xc = fixed(cx, 1);
    s << "  <g class=\"box\">\n"
      << "    <line x1=\"" << xc << "\" y1=\"" << fixed(y_of(b.whisker_low), 1) << "\" x2=\"" << xc << "\" y2=\""
      << fixed(y_of(b.q1), 1) << "\" stroke=\"#000000\"/>\n"
      << "    <line x1=\"" << xc << "\" y1=\"" << fixed(y_of(b.q3), 1) << "\" x2=\"" << xc << "\" y2=\""
      << fixed(y_of(b.whisker_high), 1) << "\" stroke=\"#000000\"/>\n"
      << "    <line x1=\"" << fixed(cx - half / 2, 1) << "\" y1=\"" << fixed(y_of(b.whisker_low), 1) << "\" x2=\""
      << fixed(cx + half / 2, 1) << "\" y2=\"" << fixed(y_of(b.whisker_low), 1) << "\" stroke=\"#000000\"/>\n"
      << "    <line x1=\"" << fixed(cx - half / 2, 1) << "\" y1=\"" << fixed(y_of(b.whisker_high), 1) << "\" x2=\""
      << fixed(cx + half / 2, 1) << "\" y2=\"" << fixed(y_of(b.whisker_high), 1) << "\" stroke=\"#000000\"/>\n"
      << "    <rect x=\"" << x0 << "\" y=\"" << fixed(y_of(b.q3), 1) << "\" width=\"" << fixed(2 * half, 1)
      << "\" height=\"" << fixed(y_of(b.q1) - y_of(b.q3), 1)
      << "\" fill=\"#9ecae1\" stroke=\"#000000\"/>\n"
      << "    <line x1=\"" << x0 << "\" y1=\"" << fixed(y_of(b.median), 1) << "\" x2=\"" << x1 << "\" y2=\""
      << fixed(y_of(b.median), 1) << "\" stroke=\"#000000\" stroke-width=\"2\"/>\n";
    for (double o : b.outliers) {
      s << "    <circle cx=\"" << xc << "\" cy=\"" << fixed(y_of(o), 1)
        << "\" r=\"3\" fill=\"none\" stroke=\"#000000\"/>\n";
    }
    const auto ly = margin_top + plot_h + 14;
    s << "    <text x=\"" << xc << "\" y=\"" << ly << "\" text-anchor=\"end\" transform=\"rotate(-45 " << xc << " " << ly
      << ")\">" << xml_escape(b.label) << "</text>\n"
      << "  </g>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::vector<std::filesystem::path> render(const AnalysisReport& report, const std::set<Format>& formats,
                                          const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> manifest;
  auto emit = [&](const char* name, const std::string& content) {
    const auto path = out_dir / name;
    write_file(path, content);
    manifest.push_back(path);
  };
  if (formats.count(Format::json)) emit("report.json", report_json(report));
  if (formats.count(Format::csv)) {
    emit("pairwise.csv", pairwise_csv(report));
    emit("boxplot.csv", boxplot_csv(report));
  }
  if (formats.count(Format::svg)) {
    const std::string title = "Energy by " + report.group_by;
    emit("boxplot.svg", boxplot_svg(report.boxplots, title, report.metric));
    emit("heatmap.svg", heatmap_svg(report.heatmap, "Cliff's delta by " + report.group_by));
  }
  return manifest;
}

std::string summary_table(const AnalysisReport& r) {
  std::size_t wa = 7, wb = 7;
  for (const auto& p : r.pairwise) {
    wa = std::max(wa, p.label_a.size());
    wb = std::max(wb, p.label_b.size());
  }
  std::ostringstream s;
  s << "Kruskal-Wallis H=" << fixed(r.omnibus.h_statistic, 4) << " df=" << r.omnibus.df
    << " p=" << general(r.omnibus.p_value) << "\n";
  auto pad = [](const std::string& text, std::size_t w) { return text + std::string(w - text.size(), ' '); };
  s << pad("group a", wa) << "  " << pad("group b", wb) << "  raw p       adj p       delta    sig\n";
  for (const auto& p : r.pairwise) {
    char nums[96];
    std::snprintf(nums, sizeof nums, "%-10.4g  %-10.4g  %+.4f  %s", p.raw_p, p.adjusted_p, p.cliffs_delta,
                  p.significant ? "*" : "");
    s << pad(p.label_a, wa) << "  " << pad(p.label_b, wb) << "  " << nums << "\n";
  }
  return s.str();
}

} // namespace wattbench::report
