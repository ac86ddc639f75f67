#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "mbf/bounds.hpp"
#include "mbf/mobility.hpp"
#include "mbf/types.hpp"

namespace mbf::oracle {

struct EnumGrid {
  int n = 8;
  Dur Delta = 1;
  Dur tr = 2;
  Tick horizon = 0;  // 0 means tr + Delta
  std::uint64_t max_schedules = 10'000'000;
};

struct MaxBResult {
  std::int64_t max_b = 0;
  std::uint64_t schedules = 0;
};

// Largest number of distinct servers one agent occupies during a closed
// window of tr ticks, over every ITB-valid schedule on n servers and every
// window offset. Throws std::runtime_error when the schedule guard trips.
MaxBResult enumerate_maxB(const EnumGrid& grid);

// One reply delivered to the reader during the worst-case read window.
struct Delivery {
  int sender = 0;
  Value value = 0;
  bool fake = false;
  Tick sent_at = 0;
  Tick delivered_at = 0;
};

struct WindowRun {
  Tick t = 0;  // read start, in fine ticks (all durations doubled)
  std::vector<Delivery> deliveries;
  std::int64_t incorrect() const;
  std::int64_t correct() const;
};

// Simulates a read of length tr under one agent moving as in S* over n
// servers, at the worst-case window offset. Byzantine servers (and cured ones
// in CUM) answer once with `fake_value` after one fine tick; correct servers
// answer the request, and servers finishing a cure inside the window answer
// again. At most `fake_budget` fake replies are sent (negative: unlimited).
WindowRun simulate_window(const bounds::BoundsInput& in, int n, Value correct_value,
                          Value fake_value, std::int64_t fake_budget = -1);

// Incorrect and correct reply counts seen by the reader in the worst-case
// window. `in.f` must be 0 or 1; f = 0 gives (0, n).
bounds::ReplyCounts enumerate_reply_sets(const bounds::BoundsInput& in, int n);

struct AttackPlan {
  bounds::BoundsInput in;
  int n = 0;
  Tick window_start = 0;
  std::int64_t max_incorrect = 0;
  std::int64_t min_correct = 0;
  std::int64_t fake_budget = 0;
  Value v0 = 1;
  Value v1 = 2;
};

// Feasible iff the adversary can match the correct replies one for one.
std::optional<AttackPlan> build_attack(int n, const bounds::BoundsInput& in);

struct Execution {
  Value correct_value = 0;
  std::map<Value, std::int64_t> value_counts;
  std::vector<std::int64_t> sender_profile;  // per-sender message counts, sorted
  std::vector<Delivery> deliveries;
};

struct AttackOutcome {
  Execution e0, e1;
  bool indistinguishable = false;
  bool values_differ = false;
};

// E0: the register holds v0 and the agent pushes v1; E1 swaps the roles.
AttackOutcome simulate_attack(const AttackPlan& plan);

// Senders sorted by how many of x consecutive S* messages they contribute.
std::vector<std::int64_t> occurrence_profile(int n, std::int64_t x);

struct CompositionReport {
  std::size_t checked = 0;
  std::size_t failures = 0;
};

// Checks that x mod n senders contribute floor(x/n)+1 messages and the rest
// floor(x/n), for every n in [1, n_max] and x in [0, x_max].
CompositionReport sweep_composition_identity(int n_max, std::int64_t x_max);

}  // namespace mbf::oracle
