#include "mbf/harness.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include "mbf/oracle.hpp"
#include "mbf/proto_cam.hpp"
#include "mbf/proto_cum.hpp"

namespace mbf::harness {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::int64_t to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    auto x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("setting '" + key + "' expects an integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("setting '" + key + "' expects a boolean, got '" + v + "'");
}

std::string schedule_name(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::kSStar: return "sstar";
    case ScheduleKind::kRandom: return "random";
    case ScheduleKind::kFile: return "file";
  }
  return "?";
}

json payload_body(const Payload& p) {
  return std::visit(
      [](const auto& m) -> json {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, WriteMsg>) {
          return {{"v", m.value}, {"sn", m.csn}};
        } else if constexpr (std::is_same_v<M, ReplyMsg>) {
          return {{"entries", proto::to_json(m.entries)}};
        } else if constexpr (std::is_same_v<M, EchoMsg>) {
          json j{{"entries", proto::to_json(m.entries)}};
          if (m.bottom) j["bottom"] = true;
          if (!m.pending_reads.empty()) j["pending_reads"] = m.pending_reads;
          if (m.nonce) j["nonce"] = *m.nonce;
          return j;
        } else if constexpr (std::is_same_v<M, EchoReqMsg>) {
          return m.nonce ? json{{"nonce", *m.nonce}} : json::object();
        } else {
          return {{"client", m.client}};
        }
      },
      p);
}

std::string op_name(checker::OpKind k) { return k == checker::OpKind::kWrite ? "write" : "read"; }

std::string join_dwell(const std::vector<Dur>& d) {
  std::string out;
  for (std::size_t i = 0; i < d.size(); ++i) out += (i ? "," : "") + std::to_string(d[i]);
  return out;
}

std::string format_ops(const std::vector<ScriptedOp>& ops) {
  std::string out;
  for (const auto& op : ops) {
    if (!out.empty()) out += "; ";
    out += op_name(op.kind) + " " + std::to_string(op.at) + " " +
           std::to_string(op.kind == checker::OpKind::kWrite ? op.value : op.client);
  }
  return out;
}

}  // namespace

void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string v = trim(raw_value);
  if (key == "model") {
    cfg.model = parse_model(v);
  } else if (key == "n") {
    cfg.n = static_cast<int>(to_int(key, v));
  } else if (key == "f") {
    cfg.f = static_cast<int>(to_int(key, v));
  } else if (key == "delta") {
    cfg.delta = to_int(key, v);
  } else if (key == "Delta") {
    cfg.Delta = to_int(key, v);
  } else if (key == "dwell") {
    cfg.dwell.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!trim(item).empty()) cfg.dwell.push_back(to_int(key, trim(item)));
    }
  } else if (key == "schedule") {
    if (v == "sstar" || v == "S*") {
      cfg.schedule = ScheduleKind::kSStar;
    } else if (v == "random" || v == "random-itb") {
      cfg.schedule = ScheduleKind::kRandom;
    } else if (v == "file") {
      cfg.schedule = ScheduleKind::kFile;
    } else {
      throw ConfigError("unknown schedule '" + v + "' (sstar, random, file)");
    }
  } else if (key == "sstar_phase") {
    cfg.sstar_phase = to_int(key, v);
  } else if (key == "schedule_file") {
    cfg.schedule_file = v;
    cfg.schedule = ScheduleKind::kFile;
  } else if (key == "strategy") {
    cfg.strategy = mob::parse_strategy(v);
  } else if (key == "delay") {
    cfg.delay = sim::parse_delay_kind(v);
  } else if (key == "phase_offset") {
    cfg.phase_offset = to_int(key, v);
  } else if (key == "readers") {
    cfg.readers = static_cast<int>(to_int(key, v));
  } else if (key == "reads") {
    cfg.reads = static_cast<int>(to_int(key, v));
  } else if (key == "writes") {
    cfg.writes = static_cast<int>(to_int(key, v));
  } else if (key == "ops") {
    cfg.ops = parse_ops(v);
  } else if (key == "horizon") {
    cfg.horizon = to_int(key, v);
  } else if (key == "seed") {
    try {
      cfg.seed = std::stoull(v);
    } catch (const std::exception&) {
      throw ConfigError("setting 'seed' expects an unsigned integer, got '" + v + "'");
    }
  } else if (key == "trace_messages") {
    cfg.trace_messages = to_bool(key, v);
  } else if (key == "snapshot_every") {
    cfg.snapshot_every = to_int(key, v);
  } else {
    throw ConfigError("unknown setting '" + key + "'");
  }
}

RunConfig parse_config(std::istream& in, RunConfig base) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, std::move(base));
}

json to_json(const RunConfig& cfg) {
  return json{{"model", to_string(cfg.model)},
              {"n", cfg.n},
              {"f", cfg.f},
              {"delta", cfg.delta},
              {"Delta", cfg.Delta},
              {"dwell", join_dwell(cfg.dwell)},
              {"schedule", schedule_name(cfg.schedule)},
              {"sstar_phase", cfg.sstar_phase},
              {"schedule_file", cfg.schedule_file},
              {"strategy", mob::to_string(cfg.strategy)},
              {"delay", sim::to_string(cfg.delay)},
              {"phase_offset", cfg.phase_offset},
              {"readers", cfg.readers},
              {"reads", cfg.reads},
              {"writes", cfg.writes},
              {"ops", format_ops(cfg.ops)},
              {"horizon", cfg.horizon},
              {"seed", cfg.seed},
              {"trace_messages", cfg.trace_messages},
              {"snapshot_every", cfg.snapshot_every}};
}

std::vector<ScriptedOp> parse_ops(const std::string& text) {
  std::vector<ScriptedOp> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (trim(item).empty()) continue;
    std::istringstream is(item);
    std::string kind, extra;
    std::int64_t at = 0, arg = 0;
    if (!(is >> kind >> at >> arg) || (is >> extra)) {
      throw ConfigError("bad op '" + trim(item) + "'");
    }
    ScriptedOp op;
    op.at = at;
    if (kind == "write") {
      op.kind = checker::OpKind::kWrite;
      op.value = arg;
      if (arg <= 0) throw ConfigError("written values must be positive");
    } else if (kind == "read") {
      op.kind = checker::OpKind::kRead;
      op.client = static_cast<int>(arg);
    } else {
      throw ConfigError("bad op kind '" + kind + "'");
    }
    out.push_back(op);
  }
  return out;
}

Simulation::Simulation(RunConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.f < 1) throw ConfigError("f must be at least 1");
  if (cfg_.horizon < 1) throw ConfigError("horizon must be positive");
  th_ = thresholds_for(cfg_.model, cfg_.delta, cfg_.Delta, cfg_.f);
  n_ = cfg_.n > 0 ? cfg_.n : th_.n_min;
  if (n_ <= cfg_.f) throw ConfigError("need more servers than agents");
  if (cfg_.readers < 1) throw ConfigError("need at least one reader");

  switch (cfg_.schedule) {
    case ScheduleKind::kSStar:
      schedules_ = mob::generate_sstar(n_, cfg_.f, cfg_.Delta, cfg_.horizon, cfg_.sstar_phase);
      break;
    case ScheduleKind::kRandom: {
      mob::RandomItbParams p;
      p.n = n_;
      p.f = cfg_.f;
      p.dwell = cfg_.dwell.empty() ? std::vector<Dur>{cfg_.Delta} : cfg_.dwell;
      p.horizon = cfg_.horizon;
      p.seed = cfg_.seed;
      schedules_ = mob::generate_random_itb(p);
      break;
    }
    case ScheduleKind::kFile: {
      std::ifstream in(cfg_.schedule_file);
      if (!in) throw ConfigError("cannot open schedule file '" + cfg_.schedule_file + "'");
      schedules_ = mob::parse_schedules(in);
      if (static_cast<int>(schedules_.size()) > cfg_.f) {
        throw ConfigError("schedule file has more agents than f");
      }
      break;
    }
  }
  if (auto v = mob::validate_all(schedules_, cfg_.Delta)) {
    throw ConfigError("agent " + std::to_string(v->agent_id) + ": " + v->reason);
  }
  timeline_ = mob::derive_timeline(schedules_, n_, cfg_.horizon);

  sim::DelayPolicy policy(cfg_.delay, cfg_.delta, cfg_.seed ^ 0x5eedde1a7ULL);
  policy.set_faulty_predicate([this](int s, Tick at) { return timeline_.byzantine_at(s, at); });
  net_ = std::make_unique<sim::Network>(engine_, n_, std::move(policy));

  proto::ServerEnv env;
  env.engine = &engine_;
  env.net = net_.get();
  env.n = n_;
  env.delta = cfg_.delta;
  env.th = th_;
  env.seed = cfg_.seed;
  env.on_correct = [this](int s, Tick at) {
    timeline_.mark_correct(s, at);
    record({{"type", "correct"}, {"t", at}, {"server", s}});
  };
  for (int i = 0; i < n_; ++i) {
    if (cfg_.model == Model::kCam) {
      servers_.push_back(std::make_unique<proto::CamServer>(i, env));
    } else {
      Tick phase = cfg_.phase_offset >= 0 ? cfg_.phase_offset : i % (2 * cfg_.delta);
      servers_.push_back(std::make_unique<proto::CumServer>(i, env, phase));
    }
  }

  writer_ = std::make_unique<clients::Writer>(0, *net_, cfg_.delta, &history_);
  for (int r = 1; r <= cfg_.readers; ++r) {
    readers_.push_back(
        std::make_unique<clients::Reader>(r, *net_, cfg_.delta, th_.reply_q, &history_));
    readers_.back()->set_done_observer(
        [this](const checker::OpRecord& op, const SenderTally& replies) {
          int support = op.no_quorum ? 0 : static_cast<int>(replies.occurrences(op.entry()));
          support_[{op.t_b, op.client}] = support;
          std::size_t forged = 0;
          for (const auto& [e, senders] : replies.raw()) {
            if (proto::forged(e)) forged = std::max(forged, senders.size());
          }
          max_forged_support_ = std::max(max_forged_support_, static_cast<int>(forged));
          auto line = checker::to_json(op);
          line["type"] = "op";
          line["support"] = support;
          record(line);
        });
  }

  net_->set_receiver([this](const sim::Envelope& env) {
    if (env.recipient.is_server()) {
      servers_.at(static_cast<std::size_t>(env.recipient.index))->deliver(env);
    } else if (env.recipient.index >= 1) {
      readers_.at(static_cast<std::size_t>(env.recipient.index - 1))->on_reply(env);
    }
  });
  if (cfg_.trace_messages) {
    net_->set_send_observer([this](const sim::Envelope& env) {
      record({{"type", "msg"},
              {"t", env.sent_at},
              {"deliver", env.deliver_at},
              {"from", to_string(env.sender)},
              {"to", to_string(env.recipient)},
              {"kind", kind_name(env.payload)},
              {"body", payload_body(env.payload)}});
    });
  }
}

Simulation::~Simulation() = default;

Tick Simulation::end_of_run() const { return cfg_.horizon + 6 * cfg_.delta; }

void Simulation::add_probe(Tick at, std::function<void(Tick)> fn) {
  engine_.schedule(at, [this, fn = std::move(fn)] { fn(engine_.now()); }, sim::Phase::kProbe);
}

void Simulation::record(json line) { trace_.push_back(line.dump()); }

std::vector<ScriptedOp> Simulation::make_ops() const {
  if (!cfg_.ops.empty()) return cfg_.ops;
  const Dur d = cfg_.delta;
  sim::Rng rng(cfg_.seed ^ 0x0b5c417ULL);
  std::vector<ScriptedOp> ops;
  if (cfg_.writes > 0) {
    Tick slot = (cfg_.horizon - 2 * d) / cfg_.writes;
    if (slot < d + 1) throw ConfigError("horizon too short for the requested writes");
    for (int i = 0; i < cfg_.writes; ++i) {
      ScriptedOp op;
      op.kind = checker::OpKind::kWrite;
      op.at = i * slot + rng.uniform(0, slot - d - 1);
      op.value = 100 + i + 1;
      ops.push_back(op);
    }
  }
  for (int r = 1; r <= cfg_.readers; ++r) {
    int count = cfg_.reads / cfg_.readers + (r <= cfg_.reads % cfg_.readers ? 1 : 0);
    if (count == 0) continue;
    Tick slot = (cfg_.horizon - 2 * d) / count;
    if (slot < 2 * d + 1) throw ConfigError("horizon too short for the requested reads");
    for (int i = 0; i < count; ++i) {
      ScriptedOp op;
      op.kind = checker::OpKind::kRead;
      op.client = r;
      op.at = i * slot + rng.uniform(0, slot - 2 * d - 1);
      ops.push_back(op);
    }
  }
  std::stable_sort(ops.begin(), ops.end(),
                   [](const ScriptedOp& a, const ScriptedOp& b) { return a.at < b.at; });
  return ops;
}

RunResult Simulation::run() {
  if (ran_) throw std::logic_error("a simulation runs once");
  ran_ = true;
  const Dur d = cfg_.delta;

  auto ops = make_ops();
  std::map<int, Tick> busy_until;  // client -> first tick it may invoke again
  for (const auto& op : ops) {
    int client = op.kind == checker::OpKind::kWrite ? 0 : op.client;
    Dur len = op.kind == checker::OpKind::kWrite ? d : 2 * d;
    if (client < 0 || client > cfg_.readers) {
      throw ConfigError("op uses unknown reader " + std::to_string(client));
    }
    if (op.at < 0 || op.at + len > cfg_.horizon) {
      throw ConfigError("op at tick " + std::to_string(op.at) + " does not fit in the horizon");
    }
    auto it = busy_until.find(client);
    if (it != busy_until.end() && op.at < it->second) {
      throw ConfigError("client " + std::to_string(client) + " invokes at tick " +
                        std::to_string(op.at) + " while an operation is running");
    }
    busy_until[client] = op.at + len + 1;
  }

  json header{{"type", "config"},
              {"schema", kReportSchema},
              {"config", to_json(cfg_)},
              {"n", n_},
              {"k", th_.k},
              {"reply_q", th_.reply_q},
              {"echo_q", th_.echo_q},
              {"end_of_run", end_of_run()}};
  record(header);
  record({{"type", "schedules"}, {"text", mob::format_schedules(schedules_)}});

  // Releases go in first so a server vacated and entered at the same tick
  // is seen free before it is captured again.
  for (int s = 0; s < n_; ++s) {
    for (const auto& b : timeline_.byzantine_spans(s)) {
      if (b.end >= mob::kForever || b.end > end_of_run()) continue;
      engine_.schedule(b.end, [this, s, b] {
        servers_[static_cast<std::size_t>(s)]->release();
        record({{"type", "release"}, {"t", b.end}, {"server", s}, {"agent", b.agent}});
      }, sim::Phase::kAgent);
    }
  }
  for (int s = 0; s < n_; ++s) {
    for (const auto& b : timeline_.byzantine_spans(s)) {
      if (b.begin > end_of_run()) continue;
      engine_.schedule(b.begin, [this, s, b] {
        servers_[static_cast<std::size_t>(s)]->capture(cfg_.strategy);
        record({{"type", "capture"}, {"t", b.begin}, {"server", s}, {"agent", b.agent}});
      }, sim::Phase::kAgent);
    }
  }

  for (const auto& op : ops) {
    if (op.kind == checker::OpKind::kWrite) {
      engine_.schedule(op.at, [this, v = op.value] { writer_->write(v); });
    } else {
      auto* r = readers_.at(static_cast<std::size_t>(op.client - 1)).get();
      engine_.schedule(op.at, [r] { r->read(); });
    }
  }
  if (cfg_.snapshot_every > 0) {
    for (Tick t = 0; t <= end_of_run(); t += cfg_.snapshot_every) {
      add_probe(t, [this](Tick at) {
        auto arr = json::array();
        for (const auto& s : servers_) arr.push_back(s->snapshot());
        record({{"type", "snapshot"}, {"t", at}, {"servers", arr}});
      });
    }
  }
  for (auto& s : servers_) s->start();

  engine_.run_until(end_of_run());

  // Writes are logged when they finish; reads already went through the observer.
  for (const auto& op : history_.ops()) {
    if (op.kind != checker::OpKind::kWrite) continue;
    auto line = checker::to_json(op);
    line["type"] = "op";
    record(line);
  }

  auto validity = checker::check_validity(history_);
  auto termination = checker::check_termination(history_, d);
  auto gamma = checker::measure_gamma(timeline_, end_of_run());
  const Dur gamma_bound = (cfg_.model == Model::kCam ? 2 : 4) * d;

  std::size_t no_quorum = 0, reads = 0, writes = 0;
  for (const auto& op : history_.ops()) {
    if (op.kind == checker::OpKind::kRead) {
      ++reads;
      if (op.no_quorum) ++no_quorum;
    } else {
      ++writes;
    }
  }
  int min_support = -1;
  double sum_support = 0;
  for (const auto& [key, s] : support_) {
    min_support = min_support < 0 ? s : std::min(min_support, s);
    sum_support += s;
  }

  auto violations = [&](const std::vector<checker::Violation>& vs) {
    auto arr = json::array();
    for (std::size_t i = 0; i < vs.size() && i < 20; ++i) {
      auto op = checker::to_json(history_.ops()[vs[i].op]);
      arr.push_back({{"op", op}, {"reason", vs[i].reason}});
    }
    return arr;
  };

  const bool gamma_ok = gamma.max_span <= gamma_bound;
  const bool ok = validity.empty() && termination.empty() && gamma_ok &&
                  reads + writes == ops.size();

  json report{{"type", "report"},
              {"schema", kReportSchema},
              {"seed", cfg_.seed},
              {"model", to_string(cfg_.model)},
              {"n", n_},
              {"f", cfg_.f},
              {"delta", cfg_.delta},
              {"Delta", cfg_.Delta},
              {"reads", reads},
              {"writes", writes},
              {"scheduled_ops", ops.size()},
              {"validity_violations", validity.size()},
              {"termination_violations", termination.size()},
              {"no_quorum_reads", no_quorum},
              {"validity", violations(validity)},
              {"termination", violations(termination)},
              {"gamma",
               {{"max", gamma.max_span},
                {"bound", gamma_bound},
                {"resolved", gamma.resolved},
                {"interrupted", gamma.interrupted},
                {"open", gamma.open},
                {"ok", gamma_ok}}},
              {"replies",
               {{"reply_q", th_.reply_q},
                {"min_support", min_support},
                {"mean_support", support_.empty() ? 0.0 : sum_support / support_.size()},
                {"max_forged_support", max_forged_support_}}},
              {"agents_max_concurrent", timeline_.max_concurrent_byzantine()},
              {"messages", net_->sent()},
              {"events", engine_.executed()},
              {"ok", ok}};
  record(report);

  RunResult out;
  out.history = history_;
  out.timeline = timeline_;
  out.trace = trace_;
  out.report = std::move(report);
  out.ok = ok;
  return out;
}

RunResult run(const RunConfig& cfg) {
  Simulation sim(cfg);
  return sim.run();
}

json check_trace(std::istream& in) {
  std::string line;
  std::optional<json> header, recorded;
  checker::History history;
  struct Event {
    std::string type;
    Tick t;
    int server;
    int agent;
  };
  std::vector<Event> events;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ConfigError("trace line " + std::to_string(lineno) + ": " + e.what());
    }
    const auto type = j.value("type", "");
    if (type == "config") {
      header = j;
    } else if (type == "op") {
      history.add(checker::op_from_json(j));
    } else if (type == "capture" || type == "release" || type == "correct") {
      events.push_back({type, j.at("t").get<Tick>(), j.at("server").get<int>(), j.value("agent", -1)});
    } else if (type == "report") {
      recorded = j;
    }
  }
  if (!header) throw ConfigError("trace has no config line");

  const Dur delta = header->at("config").at("delta").get<Dur>();
  const Model model = parse_model(header->at("config").at("model").get<std::string>());
  const int n = header->at("n").get<int>();
  const Tick end = header->at("end_of_run").get<Tick>();

  mob::FailureTimeline tl(n, end);
  std::map<int, std::pair<Tick, int>> open;  // server -> (capture tick, agent)
  std::vector<std::pair<int, Tick>> departures;
  for (const auto& e : events) {
    if (e.type == "capture") {
      open[e.server] = {e.t, e.agent};
    } else if (e.type == "release") {
      auto it = open.find(e.server);
      if (it == open.end()) throw ConfigError("release without capture in trace");
      tl.add_byzantine(e.server, {it->second.first, e.t, it->second.second});
      open.erase(it);
      departures.emplace_back(e.server, e.t);
    }
  }
  for (const auto& [s, b] : open) tl.add_byzantine(s, {b.first, mob::kForever, b.second});
  for (const auto& [s, t] : departures) tl.add_cured(s, t);
  for (const auto& e : events) {
    if (e.type == "correct") tl.mark_correct(e.server, e.t);
  }

  auto validity = checker::check_validity(history);
  auto termination = checker::check_termination(history, delta);
  auto gamma = checker::measure_gamma(tl, end);
  const Dur bound = (model == Model::kCam ? 2 : 4) * delta;
  std::size_t no_quorum = 0;
  for (const auto& op : history.ops()) no_quorum += op.no_quorum ? 1 : 0;

  auto reasons = json::array();
  for (const auto& v : validity) reasons.push_back(v.reason);
  for (const auto& v : termination) reasons.push_back(v.reason);

  json out{{"ops", history.size()},
           {"validity_violations", validity.size()},
           {"termination_violations", termination.size()},
           {"no_quorum_reads", no_quorum},
           {"gamma_max", gamma.max_span},
           {"gamma_bound", bound},
           {"violations", reasons}};
  bool ok = validity.empty() && termination.empty() && gamma.max_span <= bound;
  if (recorded) {
    bool same = recorded->at("validity_violations") == out["validity_violations"] &&
                recorded->at("termination_violations") == out["termination_violations"] &&
                recorded->at("gamma").at("max") == out["gamma_max"];
    out["matches_report"] = same;
    ok = ok && same;
  }
  out["ok"] = ok;
  return out;
}

std::vector<SweepRow> sweep(const RunConfig& base,
                            const std::vector<std::pair<std::string, std::vector<std::string>>>& grid) {
  std::vector<std::map<std::string, std::string>> combos{{}};
  for (const auto& [key, values] : grid) {
    if (values.empty()) throw ConfigError("sweep axis '" + key + "' has no values");
    std::vector<std::map<std::string, std::string>> next;
    for (const auto& c : combos) {
      for (const auto& v : values) {
        auto m = c;
        m[key] = v;
        next.push_back(std::move(m));
      }
    }
    combos = std::move(next);
  }

  // Configs are validated up front so a bad axis fails before any run.
  std::vector<RunConfig> configs;
  for (const auto& c : combos) {
    RunConfig cfg = base;
    for (const auto& [key, values] : grid) apply_setting(cfg, key, c.at(key));
    configs.push_back(cfg);
  }

  std::vector<SweepRow> rows(combos.size());
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < configs.size(); start += workers) {
    std::vector<std::future<json>> batch;
    for (std::size_t i = start; i < std::min(configs.size(), start + workers); ++i) {
      batch.push_back(std::async(std::launch::async, [&cfg = configs[i]] {
        try {
          return run(cfg).report;
        } catch (const ConfigError& e) {
          return json{{"ok", false}, {"error", e.what()}};
        }
      }));
    }
    for (std::size_t i = 0; i < batch.size(); ++i) {
      rows[start + i] = {combos[start + i], batch[i].get()};
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  std::vector<std::string> keys;
  if (!rows.empty()) {
    for (const auto& [k, v] : rows.front().settings) keys.push_back(k);
  }
  for (const auto& k : keys) out << k << ',';
  out << "n,ok,validity_violations,termination_violations,no_quorum_reads,gamma_max,"
         "gamma_bound,min_support,messages,error\n";
  for (const auto& row : rows) {
    for (const auto& k : keys) out << row.settings.at(k) << ',';
    const auto& r = row.report;
    auto get = [&](const char* key) { return r.contains(key) ? r.at(key).dump() : ""; };
    std::string gmax, gbound, support;
    if (r.contains("gamma")) {
      gmax = r["gamma"]["max"].dump();
      gbound = r["gamma"]["bound"].dump();
    }
    if (r.contains("replies")) support = r["replies"]["min_support"].dump();
    std::string err = r.value("error", "");
    std::replace(err.begin(), err.end(), ',', ';');
    out << get("n") << ',' << (r.value("ok", false) ? "true" : "false") << ','
        << get("validity_violations") << ',' << get("termination_violations") << ','
        << get("no_quorum_reads") << ',' << gmax << ',' << gbound << ',' << support << ','
        << get("messages") << ',' << err << '\n';
  }
  return out.str();
}

json attack_report(int n, const bounds::BoundsInput& in) {
  auto window = oracle::simulate_window(in, n, 1, 2);
  json out{{"model", to_string(in.model)},
           {"n", n},
           {"f", in.f},
           {"delta", in.delta},
           {"Delta", in.Delta},
           {"gamma", in.gamma},
           {"tr", in.tr},
           {"n_lb", bounds::n_lb(in)},
           {"max_incorrect", window.incorrect()},
           {"min_correct", window.correct()}};
  auto plan = oracle::build_attack(n, in);
  out["feasible"] = plan.has_value();
  if (!plan) {
    out["indistinguishable"] = false;
    return out;
  }
  auto outcome = oracle::simulate_attack(*plan);
  auto exec_json = [](const oracle::Execution& e) {
    json counts = json::object();
    for (const auto& [v, c] : e.value_counts) counts[std::to_string(v)] = c;
    return json{{"correct_value", e.correct_value},
                {"value_counts", counts},
                {"sender_profile", e.sender_profile},
                {"deliveries", e.deliveries.size()}};
  };
  out["window_start"] = plan->window_start;
  out["fake_budget"] = plan->fake_budget;
  out["e0"] = exec_json(outcome.e0);
  out["e1"] = exec_json(outcome.e1);
  out["values_differ"] = outcome.values_differ;
  out["indistinguishable"] = outcome.indistinguishable;
  return out;
}

}  // namespace mbf::harness

namespace mbf::harness {

std::vector<bounds::BoundsInput> table_grid(const std::vector<int>& fs) {
  std::vector<bounds::BoundsInput> out;
  const Dur d = 10;
  for (int f : fs) {
    for (Model m : {Model::kCam, Model::kCum}) {
      for (Dur D : {Dur{10}, Dur{20}}) {
        out.push_back({d, D, (m == Model::kCam ? 2 : 4) * d, 2 * d, f, m});
      }
    }
  }
  return out;
}

std::vector<bounds::BoundsInput> oracle_grid() {
  std::vector<bounds::BoundsInput> out;
  for (Model m : {Model::kCam, Model::kCum}) {
    for (Dur d : {Dur{2}, Dur{3}}) {
      for (Dur D = std::max<Dur>(2, d); D <= 8 && D < 3 * d; ++D) {
        for (Dur tr = std::max<Dur>(4, 2 * d); tr <= 12; ++tr) {
          for (Dur g : {2 * d, 4 * d}) out.push_back({d, D, g, tr, 1, m});
        }
      }
    }
  }
  return out;
}

json bounds_row(const bounds::BoundsInput& in) {
  auto b = bounds::evaluate(in);
  auto at = bounds::reply_counts(in, b.n_lb + 1);
  return json{{"model", to_string(in.model)}, {"f", in.f},         {"delta", in.delta},
              {"Delta", in.Delta},            {"gamma", in.gamma}, {"tr", in.tr},
              {"max_b", b.max_b},             {"max_cu", b.max_cu}, {"max_sil", b.max_sil},
              {"min_cbc", b.min_cbc},         {"n_lb", b.n_lb},    {"n_needed", b.n_lb + 1},
              {"max_incorrect", at.max_incorrect}, {"min_correct", at.min_correct}};
}

VerifyReport verify_bounds(const std::vector<bounds::BoundsInput>& grid) {
  VerifyReport rep;
  std::map<std::pair<Dur, Dur>, std::int64_t> max_b_cache;
  for (const auto& in : grid) {
    auto key = std::make_pair(in.tr, in.Delta);
    if (!max_b_cache.count(key)) {
      oracle::EnumGrid eg;
      eg.n = 8;
      eg.Delta = in.Delta;
      eg.tr = in.tr;
      max_b_cache[key] = oracle::enumerate_maxB(eg).max_b;
    }
    const auto enum_b = max_b_cache[key];
    const auto formula_b = bounds::max_b(in.tr, in.Delta, 1);
    const auto n_lb = bounds::n_lb(in);
    const auto need = static_cast<int>(n_lb + 1);
    const auto f_at = bounds::reply_counts(in, need);
    const auto o_at = oracle::enumerate_reply_sets(in, need);
    const auto f_lb = bounds::reply_counts(in, n_lb);
    const auto o_lb = n_lb >= 1 ? oracle::enumerate_reply_sets(in, static_cast<int>(n_lb)) : f_lb;

    const bool b_ok = enum_b == formula_b;
    const bool r_ok = f_at == o_at;
    const bool strict = o_at.min_correct > o_at.max_incorrect &&
                        f_at.min_correct > f_at.max_incorrect;
    rep.points++;
    if (!b_ok) rep.max_b_mismatches++;
    if (!r_ok) rep.reply_mismatches++;
    if (!strict) rep.boundary_failures++;
    if (!(f_lb == o_lb)) rep.reply_mismatches_at_lb++;

    auto row = bounds_row(in);
    row["max_b_oracle"] = enum_b;
    row["oracle_at_need"] = {o_at.max_incorrect, o_at.min_correct};
    row["formula_at_lb"] = {f_lb.max_incorrect, f_lb.min_correct};
    row["oracle_at_lb"] = {o_lb.max_incorrect, o_lb.min_correct};
    row["ok"] = b_ok && r_ok && strict;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace mbf::harness
