#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "mbf/bounds.hpp"
#include "mbf/checker.hpp"
#include "mbf/clients.hpp"
#include "mbf/mobility.hpp"
#include "mbf/server.hpp"
#include "mbf/simclock.hpp"
#include "mbf/thresholds.hpp"

namespace mbf::harness {

inline constexpr int kReportSchema = 1;

enum class ScheduleKind { kSStar, kRandom, kFile };

struct ScriptedOp {
  checker::OpKind kind = checker::OpKind::kRead;
  Tick at = 0;
  int client = 1;   // reader id (1-based); ignored for writes
  Value value = 0;  // writes only
};

struct RunConfig {
  Model model = Model::kCam;
  int n = 0;  // 0: the protocol minimum for (model, delta, Delta, f)
  int f = 1;
  Dur delta = 10;
  Dur Delta = 20;
  std::vector<Dur> dwell;  // per-agent dwell; empty means Delta for all

  ScheduleKind schedule = ScheduleKind::kSStar;
  Tick sstar_phase = 0;
  std::string schedule_file;

  mob::ByzStrategy strategy;
  sim::DelayKind delay = sim::DelayKind::kFixedMax;

  // CUM maintenance offset: negative means server index mod 2*delta.
  Tick phase_offset = -1;

  // Random op script when `ops` is empty.
  int readers = 3;
  int reads = 60;
  int writes = 24;
  std::vector<ScriptedOp> ops;

  Tick horizon = 4000;
  std::uint64_t seed = 1;

  bool trace_messages = false;
  Tick snapshot_every = 0;  // 0 disables periodic server snapshots
};

// Applies one `key = value` setting. Throws ConfigError for unknown keys or
// malformed values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

// Key-value file: one `key = value` per line, '#' starts a comment.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});
nlohmann::json to_json(const RunConfig& cfg);

// Op script items: "write <tick> <value>" or "read <tick> <reader>",
// separated by ';'.
std::vector<ScriptedOp> parse_ops(const std::string& text);

struct RunResult {
  checker::History history;
  mob::FailureTimeline timeline;
  std::vector<std::string> trace;  // JSON lines
  nlohmann::json report;
  bool ok = false;
};

class Simulation {
 public:
  explicit Simulation(RunConfig cfg);
  ~Simulation();

  // Runs `fn` at tick `at` after every other event of that tick.
  void add_probe(Tick at, std::function<void(Tick)> fn);
  RunResult run();

  const RunConfig& config() const { return cfg_; }
  const Thresholds& thresholds() const { return th_; }
  int n() const { return n_; }
  Tick end_of_run() const;
  const proto::Server& server(int i) const { return *servers_.at(static_cast<std::size_t>(i)); }
  const mob::FailureTimeline& timeline() const { return timeline_; }
  const std::vector<mob::AgentSchedule>& schedules() const { return schedules_; }
  const checker::History& history() const { return history_; }
  sim::Engine& engine() { return engine_; }

 private:
  void record(nlohmann::json line);
  std::vector<ScriptedOp> make_ops() const;

  RunConfig cfg_;
  Thresholds th_;
  int n_ = 0;
  std::vector<mob::AgentSchedule> schedules_;
  mob::FailureTimeline timeline_;
  sim::Engine engine_;
  std::unique_ptr<sim::Network> net_;
  std::vector<std::unique_ptr<proto::Server>> servers_;
  std::unique_ptr<clients::Writer> writer_;
  std::vector<std::unique_ptr<clients::Reader>> readers_;
  checker::History history_;
  std::vector<std::string> trace_;
  std::map<std::pair<Tick, int>, int> support_;  // (t_b, reader) -> distinct backers
  int max_forged_support_ = 0;
  bool ran_ = false;
};

RunResult run(const RunConfig& cfg);

// Re-checks a saved JSON-lines trace.
nlohmann::json check_trace(std::istream& in);

// Cartesian product over `grid` applied on top of `base`; one summary row per run.
struct SweepRow {
  std::map<std::string, std::string> settings;
  nlohmann::json report;
};
std::vector<SweepRow> sweep(const RunConfig& base,
                            const std::vector<std::pair<std::string, std::vector<std::string>>>& grid);
std::string sweep_csv(const std::vector<SweepRow>& rows);

nlohmann::json attack_report(int n, const bounds::BoundsInput& in);

// The four (model, Delta regime) cells at delta = 10, Tr = 2*delta,
// gamma = 2*delta (CAM) or 4*delta (CUM), for each f in `fs`.
std::vector<bounds::BoundsInput> table_grid(const std::vector<int>& fs = {1, 2, 3});
// Small single-agent grid for formula/oracle cross-checks: delta in {2,3},
// Delta in [delta, 3*delta) within 2..8, Tr in [max(4, 2*delta), 12],
// gamma in {2*delta, 4*delta}, both models.
std::vector<bounds::BoundsInput> oracle_grid();

nlohmann::json bounds_row(const bounds::BoundsInput& in);

struct VerifyReport {
  nlohmann::json rows = nlohmann::json::array();
  std::size_t points = 0;
  std::size_t max_b_mismatches = 0;
  std::size_t reply_mismatches = 0;      // at n = n_lb + 1
  std::size_t boundary_failures = 0;     // strict inequality missing at n_lb + 1
  std::size_t reply_mismatches_at_lb = 0;  // informational, at n = n_lb
  bool ok() const { return max_b_mismatches == 0 && reply_mismatches == 0 && boundary_failures == 0; }
};
VerifyReport verify_bounds(const std::vector<bounds::BoundsInput>& grid);

}  // namespace mbf::harness
