#include "wattbench/cli/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "../common/toml_util.hpp"
#include "wattbench/common/error.hpp"
#include "wattbench/matrix/experiment.hpp"
#include "wattbench/orchestrator/runner.hpp"
#include "wattbench/report/render.hpp"
#include "wattbench/workload/test_plan.hpp"

namespace wattbench::cli {

namespace {

namespace fs = std::filesystem;

struct Overrides {
  std::string experiment;
  std::optional<int> iterations;
  std::optional<std::string> ordering;
  std::optional<std::uint64_t> seed;
  bool include_startup = false;
};

struct AnalysisArgs {
  std::string group_by;
  std::vector<std::string> fix;
  std::string formats;
  double alpha = 0.05;
};

matrix::Experiment load(const Overrides& o) {
  auto e = matrix::load_experiment(o.experiment);
  if (o.iterations) {
    if (*o.iterations < 1) throw ConfigError("--iterations must be >= 1");
    e.iterations = *o.iterations;
  }
  if (o.ordering) e.ordering = matrix::parse_ordering(*o.ordering);
  if (o.seed) e.energy.simulated.seed = *o.seed;
  if (o.include_startup) e.lifecycle.include_startup = true;
  return e;
}

std::vector<std::pair<std::string, std::string>> parse_fixed(const std::vector<std::string>& items) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--fix expects dim=value, got '" + item + "'");
    out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return out;
}

report::AnalysisOptions analysis_options(const AnalysisArgs& a, const matrix::Experiment* experiment) {
  report::AnalysisOptions opt;
  opt.alpha = a.alpha;
  if (experiment != nullptr) {
    if (a.group_by == report::kConfigGrouping) {
      for (const auto& c : matrix::enumerate_configs(experiment->dimensions, experiment->rules)) {
        opt.value_order.push_back(c.id());
      }
    } else {
      for (const auto& d : experiment->dimensions) {
        if (d.name == a.group_by) opt.value_order = d.values;
      }
    }
  }
  return opt;
}

void analyze_and_render(const std::vector<orchestrator::MeasurementRecord>& records, const AnalysisArgs& a,
                        const matrix::Experiment* experiment, const fs::path& out_dir, std::ostream& out) {
  const auto formats = report::parse_formats(a.formats);
  const auto rep = report::analyze(records, a.group_by, parse_fixed(a.fix), analysis_options(a, experiment));
  out << report::summary_table(rep);
  for (const auto& path : report::render(rep, formats, out_dir)) out << "wrote " << path.string() << "\n";
}

/// TOML profile: [power_scale] and [power_offsets_w] tables keyed by
/// config id.
void apply_profile(matrix::Experiment& e, const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open profile " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const auto doc = toml_util::parse(buf.str(), path.string());
  std::vector<std::string> ids;
  for (const auto& c : matrix::enumerate_configs(e.dimensions, e.rules)) ids.push_back(c.id());
  for (const char* section : {"power_scale", "power_offsets_w"}) {
    const auto* t = toml_util::table(doc, section);
    if (t == nullptr) continue;
    for (const auto& [key, node] : *t) {
      const std::string id(key.str());
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
        throw ConfigError("profile " + path.string() + " references undeclared configuration '" + id + "'");
      }
      if (!node.is_number()) toml_util::fail(node, id, "must be a number");
      auto& target = std::string_view(section) == "power_scale" ? e.energy.simulated.power_scale
                                                                : e.energy.simulated.power_offsets_w;
      target[id] = *node.value<double>();
    }
  }
  if (auto seed = toml_util::opt_int(doc, "seed")) e.energy.simulated.seed = static_cast<std::uint64_t>(*seed);
}

std::unique_ptr<orchestrator::Harness> make_harness(const matrix::Experiment& e) {
  if (e.workload.stub_app) return std::make_unique<orchestrator::SimulatedHarness>(e.energy, e.workload);
  return std::make_unique<orchestrator::LiveHarness>(e.energy);
}

orchestrator::RunSummary execute(const matrix::Experiment& e, const fs::path& csv_path,
                                 const orchestrator::RunOptions& base) {
  const auto plan = workload::load_test_plan(e.workload.plan_path);
  const auto configs = matrix::enumerate_configs(e.dimensions, e.rules);
  const auto run_plan = matrix::build_run_plan(configs, e.iterations, e.ordering);
  auto harness = make_harness(e);
  const std::string host = !e.host.empty() ? e.host : e.workload.stub_app ? "simulated" : orchestrator::local_host_name();
  orchestrator::RunContext ctx{e, plan, *harness, host};
  auto options = base;
  options.on_record = [](const orchestrator::MeasurementRecord& r, std::size_t done, std::size_t total) {
    if (r.status == orchestrator::RunStatus::ok) {
      spdlog::info("[{}/{}] {} #{}: {:.3f} J in {:.3f} s", done, total, r.config_id, r.iteration, *r.joules,
                   *r.runtime_s);
    } else {
      spdlog::warn("[{}/{}] {} #{}: failed ({})", done, total, r.config_id, r.iteration, r.reason);
    }
  };
  return orchestrator::run_plan(ctx, run_plan, csv_path, options);
}

void add_analysis_flags(CLI::App* cmd, AnalysisArgs& a, const std::string& default_formats) {
  a.group_by = report::kConfigGrouping;
  a.formats = default_formats;
  cmd->add_option("--group-by", a.group_by, "Dimension whose values form the groups (default: config_id)");
  cmd->add_option("--fix", a.fix, "Hold a dimension fixed, dim=value (repeatable)");
  cmd->add_option("--formats", a.formats, "Comma-separated output formats: json, csv, svg")
      ->default_str(default_formats);
  cmd->add_option("--alpha", a.alpha, "Significance threshold")->check(CLI::Range(0.0, 1.0))->default_str("0.05");
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Energy benchmarking across software-stack configurations", "wattbench"};
  app.require_subcommand(1);

  Overrides ov;
  AnalysisArgs an_analyze, an_report, an_sim;
  std::string out_path;
  std::string input;
  std::string profile;
  bool resume = false;
  bool list = false;
  std::optional<std::size_t> max_runs;

  auto add_experiment_flags = [&](CLI::App* cmd) {
    cmd->add_option("--experiment", ov.experiment, "Experiment file (TOML)")->required();
    cmd->add_option("--iterations", ov.iterations, "Override run.iterations");
    cmd->add_option("--ordering", ov.ordering, "blocked or round-robin");
  };

  auto* plan_cmd = app.add_subcommand("plan", "Enumerate configurations and the run plan without running anything");
  add_experiment_flags(plan_cmd);
  plan_cmd->add_flag("--list", list, "Print every run-plan entry as CSV");

  auto* run_cmd = app.add_subcommand("run", "Execute the run plan and append measurements to a CSV file");
  add_experiment_flags(run_cmd);
  run_cmd->add_option("--out", out_path, "Measurement CSV")->default_str("measurements.csv");
  run_cmd->add_flag("--resume", resume, "Skip runs already present in the CSV");
  run_cmd->add_flag("--include-startup", ov.include_startup, "Measure application startup too");
  run_cmd->add_option("--seed", ov.seed, "Seed of the simulated energy source");
  run_cmd->add_option("--max-runs", max_runs, "Stop after this many runs")->group("");

  auto* analyze_cmd = app.add_subcommand("analyze", "Run the statistical pipeline on a measurement CSV");
  auto* report_cmd = app.add_subcommand("report", "Analyze a measurement CSV and render every report format");
  for (auto* cmd : {analyze_cmd, report_cmd}) {
    cmd->add_option("input", input, "Measurement CSV")->required();
    cmd->add_option("--experiment", ov.experiment, "Experiment file, used for group order");
    cmd->add_option("--out", out_path, "Report directory")->default_str("report");
  }
  add_analysis_flags(analyze_cmd, an_analyze, "json");
  add_analysis_flags(report_cmd, an_report, "json,csv,svg");

  auto* sim_cmd = app.add_subcommand("simulate", "Simulated end-to-end campaign: measurements plus report");
  add_experiment_flags(sim_cmd);
  sim_cmd->add_option("--profile", profile, "Power profile (TOML) applied to the simulated source");
  sim_cmd->add_option("--seed", ov.seed, "Seed of the simulated energy source");
  sim_cmd->add_option("--out", out_path, "Output directory")->default_str("simulation");
  add_analysis_flags(sim_cmd, an_sim, "json,csv,svg");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? exit_ok : exit_config_error;
  }
  try {
    if (plan_cmd->parsed()) {
      const auto e = load(ov);
      const auto configs = matrix::enumerate_configs(e.dimensions, e.rules);
      const auto plan = matrix::build_run_plan(configs, e.iterations, e.ordering);
      if (list) {
        out << "position,config_id,iteration\n";
        for (std::size_t i = 0; i < plan.entries.size(); ++i) {
          out << i << ',' << plan.entries[i].config.id() << ',' << plan.entries[i].iteration << '\n';
        }
      } else {
        for (std::size_t i = 0; i < configs.size(); ++i) out << "  " << i + 1 << "  " << configs[i].id() << '\n';
      }
      out << configs.size() << (configs.size() == 1 ? " configuration, " : " configurations, ") << plan.entries.size()
          << (plan.entries.size() == 1 ? " run" : " runs") << " (" << to_string(e.ordering) << ", "
          << e.iterations << (e.iterations == 1 ? " iteration" : " iterations") << " each)\n";
      return exit_ok;
    }

    if (run_cmd->parsed()) {
      const auto e = load(ov);
      if (out_path.empty()) out_path = "measurements.csv";
      if (!e.workload.stub_app) energy::check_available(e.energy);
      orchestrator::RunOptions options;
      options.resume = resume;
      options.stop_after = max_runs;
      const auto summary = execute(e, out_path, options);
      out << summary.ok << " ok, " << summary.failed << " failed, " << summary.skipped << " skipped -> " << out_path
          << '\n';
      return summary.failed > 0 ? exit_run_failures : exit_ok;
    }

    if (analyze_cmd->parsed() || report_cmd->parsed()) {
      std::optional<matrix::Experiment> e;
      if (!ov.experiment.empty()) e = matrix::load_experiment(ov.experiment);
      if (out_path.empty()) out_path = "report";
      const auto table = orchestrator::load_records(input);
      const auto& a = report_cmd->parsed() ? an_report : an_analyze;
      analyze_and_render(table.records, a, e ? &*e : nullptr, out_path, out);
      return exit_ok;
    }

    if (sim_cmd->parsed()) {
      auto e = load(ov);
      if (!e.workload.stub_app || e.energy.kind != energy::SourceKind::simulated) {
        throw ConfigError("simulate needs a simulated energy source and workload.app = \"stub\"");
      }
      if (!profile.empty()) apply_profile(e, profile);
      if (out_path.empty()) out_path = "simulation";
      const fs::path dir(out_path);
      fs::create_directories(dir);
      const auto csv_path = dir / "measurements.csv";
      fs::remove(csv_path);
      const auto summary = execute(e, csv_path, {});
      out << summary.ok << " ok, " << summary.failed << " failed -> " << csv_path.string() << '\n';
      const auto table = orchestrator::load_records(csv_path);
      analyze_and_render(table.records, an_sim, &e, dir / "report", out);
      return summary.failed > 0 ? exit_run_failures : exit_ok;
    }
  } catch (const SourceUnavailable& ex) {
    err << "energy source unavailable: " << ex.what() << '\n';
    return exit_source_unavailable;
  } catch (const AnalysisError& ex) {
    err << "analysis not possible: " << ex.what() << '\n';
    return exit_analysis_infeasible;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return exit_config_error;
  } catch (const fs::filesystem_error& ex) {
    err << "error: " << ex.what() << '\n';
    return exit_config_error;
  }
  return exit_config_error;
}

} // namespace wattbench::cli
