// mbfsim: run, sweep and check register emulations under mobile Byzantine agents.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mbf/bounds.hpp"
#include "mbf/harness.hpp"

using nlohmann::json;
using namespace mbf;

namespace {

struct Overrides {
  std::string config;
  std::vector<std::string> sets;
  std::string model, schedule, schedule_file, strategy, delay, dwell, ops;
  int n = -1, f = -1, readers = -1, reads = -1, writes = -1;
  long long delta = -1, Delta = -1, horizon = -1, phase_offset = -2, sstar_phase = -1;
  std::string seed;
};

void add_run_options(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "key = value config file");
  app->add_option("--set", o.sets, "extra key=value setting (repeatable)");
  app->add_option("--model", o.model, "cam or cum");
  app->add_option("--n", o.n, "servers (default: protocol minimum)");
  app->add_option("--f", o.f, "agents");
  app->add_option("--delta", o.delta, "max message delay, ticks");
  app->add_option("--Delta", o.Delta, "min agent dwell, ticks");
  app->add_option("--dwell", o.dwell, "per-agent dwell list, e.g. 20,25");
  app->add_option("--schedule", o.schedule, "sstar, random or file");
  app->add_option("--schedule-file", o.schedule_file, "agent schedule file");
  app->add_option("--sstar-phase", o.sstar_phase, "delay of the first S* move");
  app->add_option("--strategy", o.strategy, "silent, echo-fixed[:v:sn], mirror[:v], garbage[:seed]");
  app->add_option("--delay", o.delay, "fixed-max, uniform or adversarial");
  app->add_option("--phase-offset", o.phase_offset, "CUM maintenance offset (-1: per server)");
  app->add_option("--readers", o.readers, "reader count");
  app->add_option("--reads", o.reads, "random script: total reads");
  app->add_option("--writes", o.writes, "random script: total writes");
  app->add_option("--ops", o.ops, "explicit script: 'write <t> <v>; read <t> <reader>; ...'");
  app->add_option("--horizon", o.horizon, "last tick for operations and agent moves");
  app->add_option("--seed", o.seed, "64-bit seed");
}

harness::RunConfig build_config(const Overrides& o) {
  harness::RunConfig cfg;
  if (!o.config.empty()) cfg = harness::load_config(o.config);
  auto set = [&](const char* key, const std::string& v) { harness::apply_setting(cfg, key, v); };
  if (!o.model.empty()) set("model", o.model);
  if (o.n >= 0) set("n", std::to_string(o.n));
  if (o.f >= 0) set("f", std::to_string(o.f));
  if (o.delta >= 0) set("delta", std::to_string(o.delta));
  if (o.Delta >= 0) set("Delta", std::to_string(o.Delta));
  if (!o.dwell.empty()) set("dwell", o.dwell);
  if (!o.schedule.empty()) set("schedule", o.schedule);
  if (!o.schedule_file.empty()) set("schedule_file", o.schedule_file);
  if (o.sstar_phase >= 0) set("sstar_phase", std::to_string(o.sstar_phase));
  if (!o.strategy.empty()) set("strategy", o.strategy);
  if (!o.delay.empty()) set("delay", o.delay);
  if (o.phase_offset >= -1) set("phase_offset", std::to_string(o.phase_offset));
  if (o.readers >= 0) set("readers", std::to_string(o.readers));
  if (o.reads >= 0) set("reads", std::to_string(o.reads));
  if (o.writes >= 0) set("writes", std::to_string(o.writes));
  if (!o.ops.empty()) set("ops", o.ops);
  if (o.horizon >= 0) set("horizon", std::to_string(o.horizon));
  if (!o.seed.empty()) set("seed", o.seed);
  for (const auto& kv : o.sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    harness::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

void print_run_summary(const json& r) {
  std::cout << "model " << r["model"].get<std::string>() << "  n=" << r["n"] << " f=" << r["f"]
            << " delta=" << r["delta"] << " Delta=" << r["Delta"] << " seed=" << r["seed"] << "\n"
            << "ops: " << r["writes"] << " writes, " << r["reads"] << " reads\n"
            << "validity violations: " << r["validity_violations"] << "\n"
            << "termination violations: " << r["termination_violations"]
            << " (no-quorum reads: " << r["no_quorum_reads"] << ")\n"
            << "gamma: max " << r["gamma"]["max"] << " (bound " << r["gamma"]["bound"] << ", "
            << r["gamma"]["resolved"] << " cures)\n"
            << "reply support: min " << r["replies"]["min_support"] << " of quorum "
            << r["replies"]["reply_q"] << ", forged max " << r["replies"]["max_forged_support"]
            << "\n"
            << "result: " << (r["ok"].get<bool>() ? "PASS" : "FAIL") << "\n";
}

bounds::BoundsInput bounds_input(const std::string& model, long long delta, long long Delta,
                                 long long gamma, long long tr, int f) {
  bounds::BoundsInput in;
  in.model = parse_model(model);
  in.delta = delta;
  in.Delta = Delta;
  in.gamma = gamma >= 0 ? gamma : (in.model == Model::kCam ? 2 : 4) * delta;
  in.tr = tr >= 0 ? tr : 2 * delta;
  in.f = f;
  bounds::check(in);
  return in;
}

void print_bounds_table(const std::vector<json>& rows) {
  std::printf("%-5s %3s %6s %6s %6s %4s %6s %6s %7s %7s %5s %8s\n", "model", "f", "delta",
              "Delta", "gamma", "Tr", "MaxB", "MaxCu", "MaxSil", "minCBC", "n_lb", "n_needed");
  for (const auto& r : rows) {
    std::printf("%-5s %3d %6lld %6lld %6lld %4lld %6lld %6lld %7lld %7lld %5lld %8lld\n",
                r["model"].get<std::string>().c_str(), r["f"].get<int>(),
                r["delta"].get<long long>(), r["Delta"].get<long long>(),
                r["gamma"].get<long long>(), r["tr"].get<long long>(),
                r["max_b"].get<long long>(), r["max_cu"].get<long long>(),
                r["max_sil"].get<long long>(), r["min_cbc"].get<long long>(),
                r["n_lb"].get<long long>(), r["n_needed"].get<long long>());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regular-register emulation under mobile Byzantine agents"};
  app.require_subcommand(1);

  Overrides run_o;
  std::string trace_path, report_path;
  bool json_only = false;
  auto* run_cmd = app.add_subcommand("run", "simulate one configuration and check it");
  add_run_options(run_cmd, run_o);
  run_cmd->add_option("--trace", trace_path, "write the JSON-lines trace here");
  run_cmd->add_option("--report", report_path, "write the JSON report here");
  run_cmd->add_flag("--trace-messages", "include every message in the trace");
  run_cmd->add_option("--snapshot-every", "server snapshot period in ticks");
  run_cmd->add_flag("--json", json_only, "print the JSON report instead of a summary");

  Overrides sweep_o;
  std::vector<std::string> axes;
  std::string csv_path, sweep_json;
  auto* sweep_cmd = app.add_subcommand("sweep", "run the Cartesian product of setting axes");
  add_run_options(sweep_cmd, sweep_o);
  sweep_cmd->add_option("--grid", axes, "axis key=v1,v2,... (repeatable)")->required();
  sweep_cmd->add_option("--csv", csv_path, "write the CSV summary here (default: stdout)");
  sweep_cmd->add_option("--out-json", sweep_json, "write all reports as a JSON array");

  std::string grid = "default", b_model = "cam";
  long long b_delta = 10, b_Delta = 20, b_gamma = -1, b_tr = -1;
  int b_f = 1;
  bool b_json = false;
  auto* bounds_cmd = app.add_subcommand("bounds", "evaluate replica lower bounds");
  bounds_cmd->add_option("--grid", grid, "default (the standard bound cells), oracle, or single");
  bounds_cmd->add_option("--model", b_model);
  bounds_cmd->add_option("--delta", b_delta);
  bounds_cmd->add_option("--Delta", b_Delta);
  bounds_cmd->add_option("--gamma", b_gamma, "default 2*delta (cam) or 4*delta (cum)");
  bounds_cmd->add_option("--tr", b_tr, "read duration, default 2*delta");
  bounds_cmd->add_option("--f", b_f);
  bounds_cmd->add_flag("--json", b_json);

  bool v_json = false;
  auto* verify_cmd = app.add_subcommand("verify-bounds", "compare formulas with brute force");
  verify_cmd->add_flag("--json", v_json);

  std::string a_model = "cam";
  long long a_delta = 10, a_Delta = 20, a_gamma = -1, a_tr = -1;
  int a_n = 4;
  auto* attack_cmd = app.add_subcommand("attack", "build and replay the indistinguishability attack");
  attack_cmd->add_option("--model", a_model);
  attack_cmd->add_option("--n", a_n);
  attack_cmd->add_option("--delta", a_delta);
  attack_cmd->add_option("--Delta", a_Delta);
  attack_cmd->add_option("--gamma", a_gamma);
  attack_cmd->add_option("--tr", a_tr);

  std::string check_path;
  auto* check_cmd = app.add_subcommand("check", "re-run the checker on a saved trace");
  check_cmd->add_option("trace", check_path, "JSON-lines trace")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      auto cfg = build_config(run_o);
      if (run_cmd->count("--trace-messages")) cfg.trace_messages = true;
      if (run_cmd->count("--snapshot-every")) {
        cfg.snapshot_every = run_cmd->get_option("--snapshot-every")->as<long long>();
      }
      auto res = harness::run(cfg);
      if (!trace_path.empty()) {
        std::string text;
        for (const auto& l : res.trace) text += l + "\n";
        write_file(trace_path, text);
      }
      if (!report_path.empty()) write_file(report_path, res.report.dump(2) + "\n");
      if (json_only) {
        std::cout << res.report.dump(2) << "\n";
      } else {
        print_run_summary(res.report);
      }
      return res.ok ? 0 : 1;
    }
    if (*sweep_cmd) {
      auto base = build_config(sweep_o);
      std::vector<std::pair<std::string, std::vector<std::string>>> axes_parsed;
      for (const auto& a : axes) {
        auto eq = a.find('=');
        if (eq == std::string::npos) throw ConfigError("--grid expects key=v1,v2, got '" + a + "'");
        std::vector<std::string> values;
        std::stringstream ss(a.substr(eq + 1));
        std::string v;
        while (std::getline(ss, v, ',')) values.push_back(v);
        axes_parsed.emplace_back(a.substr(0, eq), values);
      }
      auto rows = harness::sweep(base, axes_parsed);
      auto csv = harness::sweep_csv(rows);
      if (csv_path.empty()) {
        std::cout << csv;
      } else {
        write_file(csv_path, csv);
      }
      if (!sweep_json.empty()) {
        json arr = json::array();
        for (const auto& r : rows) arr.push_back({{"settings", r.settings}, {"report", r.report}});
        write_file(sweep_json, arr.dump(2) + "\n");
      }
      bool all = true;
      for (const auto& r : rows) all = all && r.report.value("ok", false);
      std::cerr << rows.size() << " runs, " << (all ? "all passed" : "some failed") << "\n";
      return all ? 0 : 1;
    }
    if (*bounds_cmd) {
      std::vector<bounds::BoundsInput> inputs;
      if (grid == "default") {
        inputs = harness::table_grid();
      } else if (grid == "oracle") {
        inputs = harness::oracle_grid();
      } else if (grid == "single") {
        inputs.push_back(bounds_input(b_model, b_delta, b_Delta, b_gamma, b_tr, b_f));
      } else {
        throw ConfigError("unknown grid '" + grid + "' (default, oracle, single)");
      }
      std::vector<json> rows;
      for (const auto& in : inputs) rows.push_back(harness::bounds_row(in));
      if (b_json) {
        std::cout << json(rows).dump(2) << "\n";
      } else {
        print_bounds_table(rows);
      }
      return 0;
    }
    if (*verify_cmd) {
      auto rep = harness::verify_bounds(harness::oracle_grid());
      if (v_json) {
        std::cout << json{{"points", rep.points},
                          {"max_b_mismatches", rep.max_b_mismatches},
                          {"reply_mismatches", rep.reply_mismatches},
                          {"boundary_failures", rep.boundary_failures},
                          {"reply_mismatches_at_lb", rep.reply_mismatches_at_lb},
                          {"ok", rep.ok()},
                          {"rows", rep.rows}}
                         .dump(2)
                  << "\n";
      } else {
        std::printf("%-5s %5s %5s %5s %4s %9s %12s %12s %4s\n", "model", "delta", "Delta",
                    "gamma", "Tr", "MaxB f/o", "n_needed", "replies f/o", "ok");
        for (const auto& r : rep.rows) {
          std::string b = r["max_b"].dump() + "/" + r["max_b_oracle"].dump();
          std::string rc = r["max_incorrect"].dump() + ":" + r["min_correct"].dump() + "/" +
                           r["oracle_at_need"][0].dump() + ":" + r["oracle_at_need"][1].dump();
          std::printf("%-5s %5lld %5lld %5lld %4lld %9s %12lld %12s %4s\n",
                      r["model"].get<std::string>().c_str(), r["delta"].get<long long>(),
                      r["Delta"].get<long long>(), r["gamma"].get<long long>(),
                      r["tr"].get<long long>(), b.c_str(), r["n_needed"].get<long long>(),
                      rc.c_str(), r["ok"].get<bool>() ? "yes" : "NO");
        }
        std::printf("%zu points: %zu MaxB mismatches, %zu reply-count mismatches, "
                    "%zu boundary failures (%zu mismatches at n_lb)\n",
                    rep.points, rep.max_b_mismatches, rep.reply_mismatches,
                    rep.boundary_failures, rep.reply_mismatches_at_lb);
      }
      return rep.ok() ? 0 : 1;
    }
    if (*attack_cmd) {
      auto in = bounds_input(a_model, a_delta, a_Delta, a_gamma, a_tr, 1);
      auto rep = harness::attack_report(a_n, in);
      const bool below = a_n <= rep["n_lb"].get<long long>();
      const bool broke = rep["feasible"].get<bool>() && rep["indistinguishable"].get<bool>() &&
                         rep.value("values_differ", false);
      std::cout << "model " << a_model << " n=" << a_n << " n_lb=" << rep["n_lb"] << "\n"
                << "worst-case replies: " << rep["max_incorrect"] << " incorrect, "
                << rep["min_correct"] << " correct\n"
                << "feasible: " << (rep["feasible"].get<bool>() ? "true" : "false") << "\n"
                << "indistinguishable: " << (rep["indistinguishable"].get<bool>() ? "true" : "false")
                << "\n"
                << rep.dump(2) << "\n";
      return broke == below ? 0 : 1;
    }
    if (*check_cmd) {
      std::ifstream in(check_path);
      if (!in) throw ConfigError("cannot open trace '" + check_path + "'");
      auto rep = harness::check_trace(in);
      std::cout << rep.dump(2) << "\n";
      return rep["ok"].get<bool>() ? 0 : 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
