#include <gtest/gtest.h>

#include <sstream>

#include "test_support.hpp"
#include "wattbench/common/error.hpp"
#include "wattbench/matrix/experiment.hpp"
#include "wattbench/orchestrator/runner.hpp"
#include "wattbench/workload/stub_server.hpp"

using namespace wattbench;
using namespace wattbench::orchestrator;

namespace {

const char* kPlan = R"(
[[groups]]
name = "g"
workers = 2
loops = 10
[[groups.steps]]
method = "GET"
path = "/x"
[[groups.steps]]
method = "POST"
path = "/x"
body = "b"
)";

std::string experiment_text(const std::string& extra = "") {
  return R"(
name = "t"
[dimensions.jvm]
values = ["17", "21"]
[run]
iterations = 2
cooldown_s = 5
[lifecycle]
setup = ["start {jvm}"]
teardown = ["stop {jvm}"]
[lifecycle.readiness]
url = "http://stub/health"
timeout_s = 30
[workload]
app = "stub"
plan = "unused.toml"
sim_runtime_s = 100
sim_runtime_noise = 0.05
[energy]
kind = "simulated"
base_power_w = 40
noise = 0.02
seed = 9
app_share = 0.6
)" + extra;
}

MeasurementRecord sample_record(int i) {
  MeasurementRecord r;
  r.host = "host,with \"quotes\"";
  r.config_id = "jvm=" + std::to_string(17 + i % 2);
  r.dimensions = {{"jvm", std::to_string(17 + i % 2)}};
  r.iteration = i;
  if (i % 4 == 3) {
    r.status = RunStatus::failed;
    r.reason = "error-rate";
    r.errors = 7;
  } else {
    r.joules = 1000.0 / (i + 3);
    r.runtime_s = 0.1 * (i + 1);
  }
  r.counts.by_method = {static_cast<std::uint64_t>(i), 2, 3, 4};
  r.started_at = "2024-01-01T00:00:0" + std::to_string(i) + ".000Z";
  return r;
}

} // namespace

TEST(Records, RoundTripIsLossless) {
  RecordTable table;
  table.dimension_names = {"jvm"};
  for (int i = 0; i < 10; ++i) table.records.push_back(sample_record(i));
  std::stringstream buf;
  write_records(buf, table);
  const auto back = read_records(buf);
  EXPECT_EQ(back.dimension_names, table.dimension_names);
  EXPECT_EQ(back.records, table.records);
}

TEST(Records, OkRowWithoutJoulesNamesRow) {
  std::stringstream buf;
  buf << "host,config_id,jvm,iteration,status,reason,joules,runtime_s,get,post,put,delete,errors,started_at\n"
      << "h,jvm=17,17,0,ok,,12.5,1.0,1,1,1,1,0,t\n"
      << "h,jvm=17,17,1,ok,,,1.0,1,1,1,1,0,t\n";
  try {
    read_records(buf);
    FAIL() << "expected RecordFormatError";
  } catch (const RecordFormatError& e) {
    EXPECT_EQ(e.row(), 3u);
    EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos);
  }
}

TEST(Records, MalformedRowsRejected) {
  const std::string header =
      "host,config_id,jvm,iteration,status,reason,joules,runtime_s,get,post,put,delete,errors,started_at\n";
  for (const char* row : {"h,c,17,x,ok,,1,1,1,1,1,1,0,t\n", "h,c,17,0,maybe,,1,1,1,1,1,1,0,t\n",
                          "h,c,17,0,failed,,,,0,0,0,0,0,t\n", "h,c,17,0,ok,,1,1,1,1,1\n",
                          "h,c,17,0,ok,,1,0,1,1,1,1,0,t\n"}) {
    std::stringstream buf(header + row);
    EXPECT_THROW(read_records(buf), RecordFormatError) << row;
  }
  std::stringstream no_iteration("host,config_id,status\n");
  EXPECT_THROW(read_records(no_iteration), RecordFormatError);
}

TEST(Records, LegacyExtraColumnIsKept) {
  const auto path = fixtures::data_dir() / "records/legacy_extra_column.csv";
  const auto table = load_records(path);
  EXPECT_EQ(table.dimension_names, (std::vector<std::string>{"jvm"}));
  EXPECT_EQ(table.extra_columns, (std::vector<std::string>{"operator_note"}));
  ASSERT_EQ(table.records.size(), 3u);
  EXPECT_EQ(table.records[0].extra.at(0).second, "first run, cold cache");
  EXPECT_EQ(table.records[2].status, RunStatus::failed);
  EXPECT_EQ(table.records[2].reason, "readiness-timeout");
  std::stringstream out;
  write_records(out, table);
  EXPECT_EQ(out.str(), fixtures::read_text(path));
}

TEST(Records, Rfc3339) {
  using namespace std::chrono;
  EXPECT_EQ(format_rfc3339(system_clock::time_point(seconds(1704067200) + milliseconds(1234))),
            "2024-01-01T00:00:01.234Z");
}

class SimulatedRun : public ::testing::Test {
protected:
  void SetUp() override { load(""); }
  void load(const std::string& extra) {
    experiment = matrix::parse_experiment(experiment_text(extra));
    plan = workload::parse_test_plan(kPlan);
    harness = std::make_unique<SimulatedHarness>(experiment.energy, experiment.workload);
    configs = matrix::enumerate_configs(experiment.dimensions, experiment.rules);
  }
  RunContext ctx() { return RunContext{experiment, plan, *harness, "sim"}; }
  matrix::RunEntry entry(std::size_t c, int iteration) { return {configs[c], c, iteration}; }

  matrix::Experiment experiment;
  workload::TestPlan plan;
  std::unique_ptr<SimulatedHarness> harness;
  std::vector<matrix::StackConfig> configs;
};

TEST_F(SimulatedRun, OkRecordMatchesGroundTruth) {
  const auto r = run_single(ctx(), entry(1, 3));
  ASSERT_EQ(r.status, RunStatus::ok);
  const double power = energy::simulated_power(experiment.energy.simulated, "jvm=21", 3);
  const double runtime = harness->runtime_for("jvm=21", 3);
  EXPECT_NEAR(*r.runtime_s, runtime, 1e-9);
  EXPECT_NEAR(*r.joules, power * 0.6 * *r.runtime_s, 1e-6 * *r.joules);
  EXPECT_EQ(r.counts, workload::total_requests(plan));
  EXPECT_EQ(r.config_id, "jvm=21");
  EXPECT_EQ(r.dimension("jvm"), "21");
  EXPECT_EQ(harness->commands(), (std::vector<std::string>{"start 21", "stop 21"}));
}

TEST_F(SimulatedRun, IncludeStartupKeepsWindowInSimulation) {
  load("");
  experiment.lifecycle.include_startup = true;
  const auto r = run_single(ctx(), entry(0, 0));
  ASSERT_EQ(r.status, RunStatus::ok);
  const double power = energy::simulated_power(experiment.energy.simulated, "jvm=17", 0);
  EXPECT_NEAR(*r.joules, power * 0.6 * *r.runtime_s, 1e-6 * *r.joules);
}

TEST_F(SimulatedRun, ReadinessTimeoutStillTearsDown) {
  harness->ready_hook = [] { return false; };
  const auto r = run_single(ctx(), entry(0, 0));
  EXPECT_EQ(r.status, RunStatus::failed);
  EXPECT_EQ(r.reason, "readiness-timeout");
  EXPECT_FALSE(r.joules.has_value());
  EXPECT_EQ(harness->commands(), (std::vector<std::string>{"start 17", "stop 17"}));
}

TEST_F(SimulatedRun, ErrorRateAboveThresholdFails) {
  harness->error_fraction = 0.05;
  const auto r = run_single(ctx(), entry(0, 0));
  EXPECT_EQ(r.status, RunStatus::failed);
  EXPECT_EQ(r.reason, "error-rate");
  EXPECT_EQ(r.errors, 2u); // 5% of 40 requests
  harness->error_fraction = 0.005;
  EXPECT_EQ(run_single(ctx(), entry(0, 1)).status, RunStatus::ok);
}

TEST_F(SimulatedRun, SetupFailureAndRetries) {
  int starts = 0;
  harness->command_hook = [&](const std::string& cmd) { return cmd.rfind("start", 0) == 0 && ++starts < 3 ? 1 : 0; };
  auto r = run_single(ctx(), entry(0, 0));
  EXPECT_EQ(r.status, RunStatus::failed);
  EXPECT_EQ(r.reason, "setup-failed");
  EXPECT_EQ(harness->commands(), (std::vector<std::string>{"start 17", "stop 17"}));

  experiment.lifecycle.max_retries = 2;
  r = run_single(ctx(), entry(0, 0));
  EXPECT_EQ(r.status, RunStatus::ok);
  EXPECT_EQ(starts, 3);
}

TEST_F(SimulatedRun, RejectsNestedRuns) {
  class Nested : public Harness {
  public:
    Nested(SimulatedHarness& inner, std::function<void()> reenter) : inner_(inner), reenter_(std::move(reenter)) {}
    int run_command(const std::string& c, const Environment& e) override { return inner_.run_command(c, e); }
    workload::ProbeOutcome wait_ready(const workload::ReadinessProbe& p) override { return inner_.wait_ready(p); }
    workload::WorkloadSummary execute(const workload::TestPlan& p, const std::string& u, const matrix::StackConfig& c,
                                      int i) override {
      reenter_();
      return inner_.execute(p, u, c, i);
    }
    void sleep_for(double s) override { inner_.sleep_for(s); }
    energy::EnergySource open_source(const matrix::StackConfig& c, int i) override { return inner_.open_source(c, i); }
    std::vector<energy::Target> targets(const std::optional<std::string>& p) override { return inner_.targets(p); }
    energy::Clock& clock() override { return inner_.clock(); }
    std::chrono::system_clock::time_point wall_now() override { return inner_.wall_now(); }

  private:
    SimulatedHarness& inner_;
    std::function<void()> reenter_;
  };
  bool threw = false;
  Nested nested(*harness, [&] {
    try {
      run_single(ctx(), entry(0, 0));
    } catch (const Error&) {
      threw = true;
    }
  });
  RunContext c{experiment, plan, nested, "sim"};
  EXPECT_EQ(run_single(c, entry(0, 0)).status, RunStatus::ok);
  EXPECT_TRUE(threw);
}

TEST_F(SimulatedRun, PlanWritesOneRowPerEntry) {
  fixtures::TempDir dir;
  const auto run_plan_ = matrix::build_run_plan(configs, 2, matrix::Ordering::blocked);
  const auto summary = run_plan(ctx(), run_plan_, dir / "m.csv");
  EXPECT_EQ(summary.ok, 4u);
  const auto table = load_records(dir / "m.csv");
  ASSERT_EQ(table.records.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(table.records[i].config_id, run_plan_.entries[i].config.id());
    EXPECT_EQ(table.records[i].iteration, run_plan_.entries[i].iteration);
    EXPECT_EQ(table.records[i].status, RunStatus::ok);
  }
  // Workload windows never overlap.
  for (std::size_t i = 1; i < 4; ++i) EXPECT_LT(table.records[i - 1].started_at, table.records[i].started_at);
}

TEST_F(SimulatedRun, ResumeAppendsOnlyMissingRows) {
  fixtures::TempDir dir;
  const auto run_plan_ = matrix::build_run_plan(configs, 2, matrix::Ordering::round_robin);
  run_plan(ctx(), run_plan_, dir / "full.csv");

  RunOptions partial;
  partial.stop_after = 3;
  run_plan(ctx(), run_plan_, dir / "part.csv", partial);
  const auto before = fixtures::read_text(dir / "part.csv");
  EXPECT_THROW(run_plan(ctx(), run_plan_, dir / "part.csv"), IoError);

  RunOptions resume;
  resume.resume = true;
  const auto summary = run_plan(ctx(), run_plan_, dir / "part.csv", resume);
  EXPECT_EQ(summary.skipped, 3u);
  EXPECT_EQ(summary.ok, 1u);
  const auto after = fixtures::read_text(dir / "part.csv");
  EXPECT_EQ(after.substr(0, before.size()), before);
  EXPECT_EQ(after, fixtures::read_text(dir / "full.csv"));
  // A second resume has nothing to do.
  EXPECT_EQ(run_plan(ctx(), run_plan_, dir / "part.csv", resume).skipped, 4u);
  EXPECT_EQ(fixtures::read_text(dir / "part.csv"), after);
}

TEST_F(SimulatedRun, FailingConfigDoesNotAffectOthers) {
  harness->command_hook = [](const std::string& cmd) { return cmd == "start 21" ? 1 : 0; };
  fixtures::TempDir dir;
  const auto summary = run_plan(ctx(), matrix::build_run_plan(configs, 2, matrix::Ordering::blocked), dir / "m.csv");
  EXPECT_EQ(summary.ok, 2u);
  EXPECT_EQ(summary.failed, 2u);
  for (const auto& r : load_records(dir / "m.csv").records) {
    EXPECT_EQ(r.status == RunStatus::ok, r.config_id == "jvm=17");
  }
}

TEST(LiveRun, CommandsSeeStackEnvironment) {
  LiveHarness h{energy::EnergySourceDescriptor{}};
  EXPECT_EQ(h.run_command("test \"$STACK_JVM\" = 21", {{"STACK_JVM", "21"}}), 0);
  EXPECT_EQ(h.run_command("exit 3", {}), 3);
  EXPECT_EQ(h.run_command("echo to-stderr", {}), 0);
}

TEST(LiveRun, StubAppWithSimulatedEnergy) {
  workload::StubOptions stub_options;
  stub_options.latency_ms = 10;
  workload::StubServer server(stub_options);
  server.start();
  fixtures::TempDir dir;
  fixtures::write_text(dir / "plan.toml", kPlan);
  fixtures::write_text(dir / "exp.toml", R"(
[dimensions.jvm]
values = ["17"]
[run]
cooldown_s = 0
sample_period_ms = 20
[lifecycle]
setup = ["true"]
teardown = ["true"]
[lifecycle.readiness]
url = ")" + server.base_url() + R"(/health"
timeout_s = 5
poll_interval_s = 0.05
[workload]
plan = "plan.toml"
base_url = ")" + server.base_url() + R"(/api"
[energy]
kind = "simulated"
base_power_w = 30
app_share = 0.5
)");
  const auto e = matrix::load_experiment(dir / "exp.toml");
  const auto plan = workload::load_test_plan(e.workload.plan_path);
  LiveHarness h(e.energy);
  RunContext ctx{e, plan, h, "live"};
  const auto configs = matrix::enumerate_configs(e.dimensions, e.rules);
  const auto r = run_single(ctx, {configs[0], 0, 0});
  ASSERT_EQ(r.status, RunStatus::ok) << r.reason;
  auto expected = workload::total_requests(plan);
  expected.by_method[0] += 1; // the readiness probe
  EXPECT_EQ(server.counts(), expected);
  // The energy window brackets the workload and nothing else.
  EXPECT_NEAR(*r.joules / (30 * 0.5), *r.runtime_s, 1e-3 * *r.runtime_s);
}
