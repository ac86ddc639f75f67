#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "mbf/harness.hpp"

using namespace mbf;
using namespace mbf::harness;

namespace {

std::string joined(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

RunConfig small(Model m) {
  RunConfig cfg;
  cfg.model = m;
  cfg.horizon = 1200;
  cfg.reads = 20;
  cfg.writes = 8;
  return cfg;
}

}  // namespace

TEST(Config, ParsesKeyValueFile) {
  std::istringstream in(
      "# comment\n"
      "model = cum\n"
      "f=2\n"
      "Delta = 10   # trailing comment\n"
      "\n"
      "strategy = echo-fixed:-4:77\n"
      "delay = adversarial\n"
      "dwell = 10, 12\n"
      "schedule = random\n"
      "seed = 18446744073709551615\n");
  auto cfg = parse_config(in);
  EXPECT_EQ(cfg.model, Model::kCum);
  EXPECT_EQ(cfg.f, 2);
  EXPECT_EQ(cfg.Delta, 10);
  EXPECT_EQ(cfg.strategy.value, -4);
  EXPECT_EQ(cfg.delay, sim::DelayKind::kAdversarial);
  EXPECT_EQ(cfg.dwell, (std::vector<Dur>{10, 12}));
  EXPECT_EQ(cfg.schedule, ScheduleKind::kRandom);
  EXPECT_EQ(cfg.seed, 18446744073709551615ULL);
}

TEST(Config, RejectsUnknownAndMalformed) {
  RunConfig cfg;
  EXPECT_THROW(apply_setting(cfg, "colour", "red"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "f", "two"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "schedule", "chaos"), ConfigError);
  std::istringstream in("model cam\n");
  EXPECT_THROW(parse_config(in), ConfigError);
}

TEST(Config, JsonEchoesSettings) {
  RunConfig cfg;
  apply_setting(cfg, "seed", "9");
  auto j = to_json(cfg);
  EXPECT_EQ(j.at("seed"), 9);
  EXPECT_EQ(j.at("model"), "cam");
}

TEST(Ops, ParsesScript) {
  auto ops = parse_ops("write 0 5; read 20 2 ;write 40 6");
  ASSERT_EQ(ops.size(), 3u);
  EXPECT_EQ(ops[0].kind, checker::OpKind::kWrite);
  EXPECT_EQ(ops[0].value, 5);
  EXPECT_EQ(ops[1].client, 2);
  EXPECT_EQ(ops[1].at, 20);
  EXPECT_THROW(parse_ops("scan 1 2"), ConfigError);
}

TEST(Run, CamAtTheBoundUnderSStar) {
  RunConfig cfg;
  cfg.model = Model::kCam;
  cfg.n = 5;
  cfg.f = 1;
  cfg.delta = 10;
  cfg.Delta = 20;
  cfg.seed = 7;
  auto res = run(cfg);
  EXPECT_TRUE(res.ok) << res.report.dump(2);
  EXPECT_EQ(res.report.at("validity_violations"), 0);
  EXPECT_EQ(res.report.at("no_quorum_reads"), 0);
  EXPECT_LE(res.report.at("gamma").at("max").get<Dur>(), 20);
  EXPECT_EQ(res.report.at("reads"), cfg.reads);
  EXPECT_EQ(res.report.at("writes"), cfg.writes);
  EXPECT_EQ(res.report.at("schema"), kReportSchema);
}

TEST(Run, ScriptedOpsReturnWrittenValue) {
  RunConfig cfg = small(Model::kCum);
  cfg.Delta = 10;
  cfg.ops = parse_ops("write 0 5; read 30 1; write 100 6; read 105 2; read 200 1");
  auto res = run(cfg);
  ASSERT_TRUE(res.ok) << res.report.dump(2);
  auto reads = res.history.reads();
  ASSERT_EQ(reads.size(), 3u);
  EXPECT_EQ(reads[0].value, 5);
  EXPECT_TRUE(reads[1].value == 5 || reads[1].value == 6);
  EXPECT_EQ(reads[2].value, 6);
}

TEST(Run, RejectsOpsBeyondHorizonOrOverlapping) {
  RunConfig cfg = small(Model::kCam);
  cfg.ops = parse_ops("read 1195 1");
  EXPECT_THROW(run(cfg), ConfigError);
  cfg.ops = parse_ops("read 0 1; read 10 1");
  EXPECT_THROW(run(cfg), ConfigError);
  cfg.ops = parse_ops("read 0 4");
  EXPECT_THROW(run(cfg), ConfigError);
}

TEST(Run, SameSeedSameBytes) {
  for (Model m : {Model::kCam, Model::kCum}) {
    RunConfig cfg = small(m);
    cfg.schedule = ScheduleKind::kRandom;
    cfg.delay = sim::DelayKind::kSeededUniform;
    cfg.strategy = mob::parse_strategy("garbage:3");
    cfg.trace_messages = true;
    cfg.seed = 21;
    auto a = run(cfg), b = run(cfg);
    EXPECT_EQ(a.trace, b.trace);
    EXPECT_EQ(a.report.dump(), b.report.dump());
    cfg.seed = 22;
    EXPECT_NE(run(cfg).trace, a.trace);
  }
}

TEST(Run, TraceCanBeRechecked) {
  RunConfig cfg = small(Model::kCam);
  cfg.schedule = ScheduleKind::kRandom;
  cfg.strategy = mob::parse_strategy("echo-fixed");
  cfg.snapshot_every = 100;
  auto res = run(cfg);
  std::istringstream in(joined(res.trace));
  auto checked = check_trace(in);
  EXPECT_TRUE(checked.at("matches_report").get<bool>());
  EXPECT_EQ(checked.at("ok").get<bool>(), res.ok);
  EXPECT_EQ(checked.at("ops").get<std::size_t>(), res.history.size());
}

TEST(Run, TamperedTraceIsCaught) {
  RunConfig cfg = small(Model::kCam);
  auto res = run(cfg);
  std::string text = joined(res.trace);
  // Turn the first read result into a forged one.
  auto pos = text.find("\"kind\":\"read\"");
  ASSERT_NE(pos, std::string::npos);
  auto line_end = text.find('\n', pos);
  auto line_start = text.rfind('\n', pos) + 1;
  auto j = nlohmann::json::parse(text.substr(line_start, line_end - line_start));
  j["value"] = -5;
  text.replace(line_start, line_end - line_start, j.dump());
  std::istringstream in(text);
  auto checked = check_trace(in);
  EXPECT_EQ(checked.at("validity_violations"), 1);
  EXPECT_FALSE(checked.at("ok").get<bool>());
  std::istringstream empty("");
  EXPECT_THROW(check_trace(empty), ConfigError);
}

TEST(Run, ScheduleFileMatchesSStar) {
  RunConfig cfg = small(Model::kCam);
  auto path = ::testing::TempDir() + "sched.txt";
  {
    std::ofstream out(path);
    out << mob::format_schedules(mob::generate_sstar(5, 1, 20, cfg.horizon));
  }
  auto a = run(cfg);
  cfg.schedule = ScheduleKind::kFile;
  cfg.schedule_file = path;
  auto b = run(cfg);
  EXPECT_EQ(a.report.dump(), b.report.dump());
  cfg.schedule_file = path + ".missing";
  EXPECT_THROW(run(cfg), ConfigError);
}

TEST(Run, CumCuresWithinFourDelta) {
  RunConfig cfg = small(Model::kCum);
  cfg.Delta = 10;
  cfg.strategy = mob::parse_strategy("echo-fixed");
  for (Tick off : {0, 5, 10, 15}) {
    cfg.phase_offset = off;
    auto res = run(cfg);
    EXPECT_TRUE(res.ok) << off << res.report.dump(2);
    EXPECT_LE(res.report.at("gamma").at("max").get<Dur>(), 40);
  }
}

TEST(Run, TooFewServersIsCaught) {
  RunConfig cfg = small(Model::kCam);
  cfg.n = 3;
  cfg.strategy = mob::parse_strategy("echo-fixed");
  auto res = run(cfg);
  EXPECT_FALSE(res.ok);
}

TEST(Sweep, CartesianProduct) {
  RunConfig cfg = small(Model::kCam);
  auto rows = sweep(cfg, {{"seed", {"1", "2"}}, {"strategy", {"silent", "garbage"}}});
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[1].settings.at("strategy"), "garbage");
  for (const auto& r : rows) EXPECT_TRUE(r.report.at("ok").get<bool>());
  auto csv = sweep_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "seed,strategy,n,ok,validity_violations,termination_violations,no_quorum_reads,"
            "gamma_max,gamma_bound,min_support,messages,error");
  EXPECT_THROW(sweep(cfg, {{"bogus", {"1"}}}), ConfigError);
}

TEST(Grids, Sizes) {
  EXPECT_EQ(table_grid().size(), 12u);
  EXPECT_GE(oracle_grid().size(), 100u);
  for (const auto& in : oracle_grid()) {
    EXPECT_GE(in.tr, 2 * in.delta);
    EXPECT_LT(in.Delta, 3 * in.delta);
  }
}

TEST(Bounds, RowHasTableColumns) {
  auto row = bounds_row(table_grid({2})[0]);
  EXPECT_EQ(row.at("n_needed"), row.at("n_lb").get<int>() + 1);
}

TEST(AttackReport, Fields) {
  bounds::BoundsInput in{10, 20, 20, 20, 1, Model::kCam};
  auto at = attack_report(4, in);
  EXPECT_TRUE(at.at("feasible").get<bool>());
  EXPECT_TRUE(at.at("indistinguishable").get<bool>());
  auto above = attack_report(5, in);
  EXPECT_FALSE(above.at("feasible").get<bool>());
  EXPECT_FALSE(above.at("indistinguishable").get<bool>());
}
