#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mbf/types.hpp"

namespace mbf::mob {

// Open end for intervals that never close inside the simulated span.
inline constexpr Tick kForever = std::numeric_limits<Tick>::max() / 4;

struct Visit {
  int server = 0;
  Tick arrival = 0;
  bool operator==(const Visit&) const = default;
};

struct AgentSchedule {
  int agent_id = 0;
  Dur dwell_min = 1;
  std::vector<Visit> visits;
  bool operator==(const AgentSchedule&) const = default;
};

struct Violation {
  int agent_id = 0;
  std::size_t index = 0;  // first offending visit
  std::string reason;
};

std::optional<Violation> validate(const AgentSchedule& schedule, Dur delta_global);
std::optional<Violation> validate_all(const std::vector<AgentSchedule>& schedules,
                                      Dur delta_global);

enum class Label { kCorrect, kCured, kByzantine };
std::string to_string(Label label);

struct ByzSpan {
  Tick begin = 0;
  Tick end = kForever;  // exclusive
  int agent = 0;
};

// Opened at an agent departure. `end` stays provisional (next re-infection of
// the same server, or kForever) until the protocol reports the server correct.
struct CuredSpan {
  int server = 0;
  Tick departed = 0;
  Tick end = kForever;
  bool resolved = false;  // closed by mark_correct

  // Another agent arrived before the cure finished.
  bool interrupted() const { return !resolved && end < kForever; }
};

class FailureTimeline {
 public:
  FailureTimeline() = default;
  FailureTimeline(int servers, Tick horizon) : n_(servers), horizon_(horizon),
      byz_(static_cast<std::size_t>(servers)), cured_(static_cast<std::size_t>(servers)) {}

  int servers() const { return n_; }
  Tick horizon() const { return horizon_; }

  Label label_at(int server, Tick t) const;
  bool byzantine_at(int server, Tick t) const;
  bool cured_at(int server, Tick t) const;
  // Agent id hosted by `server` at t, if any.
  std::optional<int> agent_at(int server, Tick t) const;

  // Closes the open cured span of `server` that contains t.
  // Returns false when no such span exists.
  bool mark_correct(int server, Tick t);

  const std::vector<ByzSpan>& byzantine_spans(int server) const {
    return byz_.at(static_cast<std::size_t>(server));
  }
  const std::vector<CuredSpan>& cured_spans(int server) const {
    return cured_.at(static_cast<std::size_t>(server));
  }
  std::vector<CuredSpan> all_cured_spans() const;

  // Largest |B(t)| over [0, horizon).
  int max_concurrent_byzantine() const;

  void add_byzantine(int server, ByzSpan span);
  void add_cured(int server, Tick departed);

 private:
  int n_ = 0;
  Tick horizon_ = 0;
  std::vector<std::vector<ByzSpan>> byz_;
  std::vector<std::vector<CuredSpan>> cured_;
};

// Visits at or after `horizon` are dropped; the last host of each agent stays
// Byzantine forever. Throws ConfigError on invalid schedules, out-of-range
// servers, or two agents sharing a server.
FailureTimeline derive_timeline(const std::vector<AgentSchedule>& schedules,
                                int servers, Tick horizon);

// Agents move in lockstep every Delta ticks. Agent a sits on server
// (i*f + a) mod n during step i. The first move happens at `phase` + Delta,
// so phase in [0, Delta) shifts the whole scenario later.
std::vector<AgentSchedule> generate_sstar(int n, int f, Dur delta_move, Tick horizon,
                                          Tick phase = 0);

struct RandomItbParams {
  int n = 0;
  int f = 1;
  std::vector<Dur> dwell;  // one entry per agent, or a single shared value
  Tick horizon = 0;
  std::uint64_t seed = 0;
};

// Per agent: dwell is Delta_i plus a geometric tail; the next host is uniform
// among servers not hosting another agent.
std::vector<AgentSchedule> generate_random_itb(const RandomItbParams& params);

// Only meaningful under CAM, where a server learns it was just released.
bool cured_oracle(const FailureTimeline& timeline, Model model, int server, Tick t);

struct FailureSets {
  std::set<int> co, cu, b;  // at t1
  std::set<int> b_tilde;    // Byzantine for at least one tick of [t1, t2]
  std::set<int> co_tilde;   // correct for at least one tick of [t1, t2]
  std::set<int> sil;        // cured at every tick of [t1, t2 - delta]
};

FailureSets failure_sets(const FailureTimeline& timeline, Tick t1, Tick t2, Dur delta);

// Line format: agent <id> dwell <Delta_i> : (<server>,<tick>) (<server>,<tick>) ...
// Blank lines and lines starting with '#' are ignored.
std::string format_schedules(const std::vector<AgentSchedule>& schedules);
std::vector<AgentSchedule> parse_schedules(std::istream& in);
std::vector<AgentSchedule> parse_schedules(const std::string& text);

enum class StrategyKind { kSilent, kEchoFixedValue, kMirror, kRandomGarbage };

// Behaviour of a server while it hosts an agent. Forged values are negative
// so they can never be mistaken for writer values (which are positive).
struct ByzStrategy {
  StrategyKind kind = StrategyKind::kSilent;
  Value value = -7;
  SeqNo sn = 99;
  std::uint64_t seed = 1;
};

// "silent", "echo-fixed[:v:sn]", "mirror[:v]", "garbage[:seed]".
ByzStrategy parse_strategy(const std::string& text);
std::string to_string(const ByzStrategy& strategy);

}  // namespace mbf::mob
