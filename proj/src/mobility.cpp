#include "mbf/mobility.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <regex>
#include <sstream>

#include "mbf/simclock.hpp"

namespace mbf::mob {

std::optional<Violation> validate(const AgentSchedule& schedule, Dur delta_global) {
  if (schedule.dwell_min < delta_global) {
    return Violation{schedule.agent_id, 0,
                     "dwell " + std::to_string(schedule.dwell_min) +
                         " below global minimum " + std::to_string(delta_global)};
  }
  const auto& v = schedule.visits;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i].arrival <= v[i - 1].arrival) {
      return Violation{schedule.agent_id, i, "arrivals not strictly increasing"};
    }
    if (v[i].arrival - v[i - 1].arrival < schedule.dwell_min) {
      return Violation{schedule.agent_id, i,
                       "gap " + std::to_string(v[i].arrival - v[i - 1].arrival) +
                           " below dwell " + std::to_string(schedule.dwell_min)};
    }
    if (v[i].server == v[i - 1].server) {
      return Violation{schedule.agent_id, i, "moves onto its current host"};
    }
  }
  return std::nullopt;
}

std::optional<Violation> validate_all(const std::vector<AgentSchedule>& schedules,
                                      Dur delta_global) {
  for (const auto& s : schedules) {
    if (auto bad = validate(s, delta_global)) return bad;
  }
  return std::nullopt;
}

std::string to_string(Label label) {
  switch (label) {
    case Label::kCorrect: return "correct";
    case Label::kCured: return "cured";
    case Label::kByzantine: return "byzantine";
  }
  return "?";
}

Label FailureTimeline::label_at(int server, Tick t) const {
  if (byzantine_at(server, t)) return Label::kByzantine;
  if (cured_at(server, t)) return Label::kCured;
  return Label::kCorrect;
}

bool FailureTimeline::byzantine_at(int server, Tick t) const {
  return agent_at(server, t).has_value();
}

bool FailureTimeline::cured_at(int server, Tick t) const {
  for (const auto& c : cured_spans(server)) {
    if (c.departed <= t && t < c.end) return true;
  }
  return false;
}

std::optional<int> FailureTimeline::agent_at(int server, Tick t) const {
  for (const auto& b : byzantine_spans(server)) {
    if (b.begin <= t && t < b.end) return b.agent;
  }
  return std::nullopt;
}

bool FailureTimeline::mark_correct(int server, Tick t) {
  for (auto& c : cured_.at(static_cast<std::size_t>(server))) {
    if (!c.resolved && c.departed <= t && t < c.end) {
      c.end = t;
      c.resolved = true;
      return true;
    }
  }
  return false;
}

std::vector<CuredSpan> FailureTimeline::all_cured_spans() const {
  std::vector<CuredSpan> out;
  for (const auto& per : cured_) out.insert(out.end(), per.begin(), per.end());
  std::sort(out.begin(), out.end(), [](const CuredSpan& a, const CuredSpan& b) {
    return a.departed != b.departed ? a.departed < b.departed : a.server < b.server;
  });
  return out;
}

int FailureTimeline::max_concurrent_byzantine() const {
  std::map<Tick, int> delta;
  for (const auto& per : byz_) {
    for (const auto& b : per) {
      ++delta[b.begin];
      if (b.end < kForever) --delta[b.end];
    }
  }
  int cur = 0, best = 0;
  for (const auto& [t, d] : delta) {
    cur += d;
    if (t < horizon_) best = std::max(best, cur);
  }
  return best;
}

void FailureTimeline::add_byzantine(int server, ByzSpan span) {
  auto& spans = byz_.at(static_cast<std::size_t>(server));
  for (const auto& b : spans) {
    if (span.begin < b.end && b.begin < span.end) {
      throw ConfigError("agents " + std::to_string(b.agent) + " and " +
                        std::to_string(span.agent) + " share server " +
                        std::to_string(server) + " at tick " +
                        std::to_string(std::max(span.begin, b.begin)));
    }
  }
  spans.push_back(span);
  std::sort(spans.begin(), spans.end(),
            [](const ByzSpan& a, const ByzSpan& b) { return a.begin < b.begin; });
}

void FailureTimeline::add_cured(int server, Tick departed) {
  CuredSpan c;
  c.server = server;
  c.departed = departed;
  for (const auto& b : byzantine_spans(server)) {
    if (b.begin >= departed) {
      c.end = b.begin;
      break;
    }
  }
  if (c.end == departed) return;  // re-infected on the same tick
  cured_.at(static_cast<std::size_t>(server)).push_back(c);
}

FailureTimeline derive_timeline(const std::vector<AgentSchedule>& schedules,
                                int servers, Tick horizon) {
  if (servers < 1) throw ConfigError("need at least one server");
  Dur delta_global = kForever;
  for (const auto& s : schedules) delta_global = std::min(delta_global, s.dwell_min);
  if (auto bad = validate_all(schedules, delta_global)) {
    throw ConfigError("agent " + std::to_string(bad->agent_id) + " visit " +
                      std::to_string(bad->index) + ": " + bad->reason);
  }

  FailureTimeline tl(servers, horizon);
  std::vector<std::pair<int, Tick>> departures;
  for (const auto& s : schedules) {
    std::vector<Visit> live;
    for (const auto& v : s.visits) {
      if (v.arrival >= horizon) break;
      if (v.server < 0 || v.server >= servers) {
        throw ConfigError("agent " + std::to_string(s.agent_id) + " visits unknown server " +
                          std::to_string(v.server));
      }
      live.push_back(v);
    }
    for (std::size_t i = 0; i < live.size(); ++i) {
      Tick end = i + 1 < live.size() ? live[i + 1].arrival : kForever;
      tl.add_byzantine(live[i].server, ByzSpan{live[i].arrival, end, s.agent_id});
      if (end < kForever) departures.emplace_back(live[i].server, end);
    }
  }
  for (const auto& [server, t] : departures) tl.add_cured(server, t);
  return tl;
}

std::vector<AgentSchedule> generate_sstar(int n, int f, Dur delta_move, Tick horizon,
                                          Tick phase) {
  if (f < 1 || n < f) throw ConfigError("S* needs n >= f >= 1");
  if (delta_move < 1) throw ConfigError("Delta must be at least 1");
  if (phase < 0 || phase >= delta_move) throw ConfigError("phase must lie in [0, Delta)");
  std::vector<AgentSchedule> out;
  for (int a = 0; a < f; ++a) {
    AgentSchedule s{a, delta_move, {}};
    s.visits.push_back({a % n, 0});
    if (n > f) {
      for (Tick i = 1;; ++i) {
        Tick at = phase + i * delta_move;
        if (at >= horizon) break;
        int server = static_cast<int>((i * f + a) % n);
        s.visits.push_back({server, at});
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<AgentSchedule> generate_random_itb(const RandomItbParams& p) {
  if (p.f < 1 || p.n < p.f) throw ConfigError("random ITB needs n >= f >= 1");
  if (p.dwell.empty()) throw ConfigError("random ITB needs a dwell time");
  if (p.dwell.size() != 1 && p.dwell.size() != static_cast<std::size_t>(p.f)) {
    throw ConfigError("dwell list must have one entry or one per agent");
  }
  sim::Rng rng(p.seed);
  auto dwell_of = [&](int a) { return p.dwell.size() == 1 ? p.dwell[0] : p.dwell[a]; };

  std::vector<AgentSchedule> out;
  std::vector<int> host(static_cast<std::size_t>(p.f));
  std::vector<Tick> next_move(static_cast<std::size_t>(p.f));

  auto stay = [&](int a) {
    Dur d = dwell_of(a);
    if (d < 1) throw ConfigError("dwell must be at least 1");
    // Geometric tail with mean d/4.
    double m = static_cast<double>(d) / 4.0;
    double q = m / (1.0 + m);
    Dur extra = 0;
    while (rng.chance(q)) ++extra;
    return d + extra;
  };
  auto free_servers = [&]() {
    std::vector<int> free;
    for (int s = 0; s < p.n; ++s) {
      bool taken = false;
      for (int b = 0; b < p.f; ++b) taken = taken || host[b] == s;
      if (!taken) free.push_back(s);
    }
    return free;
  };

  for (int a = 0; a < p.f; ++a) host[a] = -1;
  for (int a = 0; a < p.f; ++a) {
    auto free = free_servers();
    host[a] = free[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(free.size()) - 1))];
    out.push_back(AgentSchedule{a, dwell_of(a), {{host[a], 0}}});
    next_move[a] = stay(a);
  }
  while (true) {
    int a = 0;
    for (int b = 1; b < p.f; ++b) {
      if (next_move[b] < next_move[a]) a = b;
    }
    Tick at = next_move[a];
    if (at >= p.horizon) break;
    auto free = free_servers();
    if (!free.empty()) {
      host[a] = free[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(free.size()) - 1))];
      out[a].visits.push_back({host[a], at});
    }
    next_move[a] = at + stay(a);
  }
  return out;
}

bool cured_oracle(const FailureTimeline& timeline, Model model, int server, Tick t) {
  if (model != Model::kCam) {
    throw ConfigError("cured_oracle is only available in the CAM model");
  }
  return timeline.label_at(server, t) == Label::kCured;
}

FailureSets failure_sets(const FailureTimeline& tl, Tick t1, Tick t2, Dur delta) {
  FailureSets out;
  for (int s = 0; s < tl.servers(); ++s) {
    switch (tl.label_at(s, t1)) {
      case Label::kCorrect: out.co.insert(s); break;
      case Label::kCured: out.cu.insert(s); break;
      case Label::kByzantine: out.b.insert(s); break;
    }
    bool silent = t2 - delta >= t1;
    for (Tick t = t1; t <= t2; ++t) {
      Label l = tl.label_at(s, t);
      if (l == Label::kByzantine) out.b_tilde.insert(s);
      if (l == Label::kCorrect) out.co_tilde.insert(s);
      if (t <= t2 - delta && l != Label::kCured) silent = false;
    }
    if (silent) out.sil.insert(s);
  }
  return out;
}

std::string format_schedules(const std::vector<AgentSchedule>& schedules) {
  std::ostringstream os;
  for (const auto& s : schedules) {
    os << "agent " << s.agent_id << " dwell " << s.dwell_min << " :";
    for (const auto& v : s.visits) os << " (" << v.server << "," << v.arrival << ")";
    os << "\n";
  }
  return os.str();
}

std::vector<AgentSchedule> parse_schedules(std::istream& in) {
  static const std::regex header(R"(^\s*agent\s+(\d+)\s+dwell\s+(\d+)\s*:(.*)$)");
  static const std::regex visit(R"(\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\))");
  std::vector<AgentSchedule> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::smatch m;
    if (!std::regex_match(line, m, header)) {
      throw ConfigError("schedule line " + std::to_string(lineno) + ": malformed header");
    }
    AgentSchedule s;
    s.agent_id = std::stoi(m[1]);
    s.dwell_min = std::stoll(m[2]);
    std::string rest = m[3];
    for (auto it = std::sregex_iterator(rest.begin(), rest.end(), visit);
         it != std::sregex_iterator(); ++it) {
      s.visits.push_back({std::stoi((*it)[1]), std::stoll((*it)[2])});
    }
    // Anything other than visits and whitespace is an error.
    std::string leftover = std::regex_replace(rest, visit, "");
    if (leftover.find_first_not_of(" \t\r") != std::string::npos) {
      throw ConfigError("schedule line " + std::to_string(lineno) + ": junk after visits");
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<AgentSchedule> parse_schedules(const std::string& text) {
  std::istringstream in(text);
  return parse_schedules(in);
}

ByzStrategy parse_strategy(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.empty()) throw ConfigError("empty strategy");
  ByzStrategy s;
  const auto& name = parts[0];
  auto arg = [&](std::size_t i) { return std::stoll(parts.at(i)); };
  try {
    if (name == "silent" && parts.size() == 1) {
      s.kind = StrategyKind::kSilent;
    } else if (name == "echo-fixed" && (parts.size() == 1 || parts.size() == 3)) {
      s.kind = StrategyKind::kEchoFixedValue;
      if (parts.size() == 3) {
        s.value = arg(1);
        s.sn = arg(2);
      }
    } else if (name == "mirror" && parts.size() <= 2) {
      s.kind = StrategyKind::kMirror;
      if (parts.size() == 2) s.value = arg(1);
    } else if (name == "garbage" && parts.size() <= 2) {
      s.kind = StrategyKind::kRandomGarbage;
      if (parts.size() == 2) s.seed = static_cast<std::uint64_t>(arg(1));
    } else {
      throw ConfigError("unknown strategy '" + text + "'");
    }
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const ConfigError*>(&e)) throw;
    throw ConfigError("bad strategy arguments in '" + text + "'");
  }
  return s;
}

std::string to_string(const ByzStrategy& s) {
  switch (s.kind) {
    case StrategyKind::kSilent: return "silent";
    case StrategyKind::kEchoFixedValue:
      return "echo-fixed:" + std::to_string(s.value) + ":" + std::to_string(s.sn);
    case StrategyKind::kMirror: return "mirror:" + std::to_string(s.value);
    case StrategyKind::kRandomGarbage: return "garbage:" + std::to_string(s.seed);
  }
  return "?";
}

}  // namespace mbf::mob
