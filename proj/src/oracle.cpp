#include "mbf/oracle.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

#include "mbf/simclock.hpp"

namespace mbf::oracle {

MaxBResult enumerate_maxB(const EnumGrid& grid) {
  if (grid.n < 1 || grid.n > 8) throw ConfigError("enumeration supports 1..8 servers");
  if (grid.Delta < 1 || grid.tr < 0) throw ConfigError("bad enumeration grid");
  const Tick horizon = grid.horizon > 0 ? grid.horizon : grid.tr + grid.Delta;
  const Tick last_offset = std::max<Tick>(0, horizon - grid.tr);

  MaxBResult out;
  std::vector<Tick> arrivals{0};
  std::vector<int> hosts{0};

  auto evaluate = [&] {
    for (Tick t = 0; t <= last_offset; ++t) {
      std::set<int> seen;
      for (std::size_t k = 0; k < arrivals.size(); ++k) {
        Tick leave = k + 1 < arrivals.size() ? arrivals[k + 1] : mob::kForever;
        if (arrivals[k] <= t + grid.tr && leave > t) seen.insert(hosts[k]);
      }
      out.max_b = std::max<std::int64_t>(out.max_b, static_cast<std::int64_t>(seen.size()));
    }
  };

  // Servers are labelled in order of first use, which removes relabelled
  // duplicates without losing any distinct-count outcome.
  std::function<void(int)> extend = [&](int labels_used) {
    if (++out.schedules > grid.max_schedules) {
      throw std::runtime_error("enumeration exceeded " + std::to_string(grid.max_schedules) +
                               " schedules");
    }
    evaluate();
    for (Tick a = arrivals.back() + grid.Delta; a < horizon; ++a) {
      int choices = std::min(labels_used + 1, grid.n);
      for (int s = 0; s < choices; ++s) {
        if (s == hosts.back()) continue;
        arrivals.push_back(a);
        hosts.push_back(s);
        extend(std::max(labels_used, s + 1));
        arrivals.pop_back();
        hosts.pop_back();
      }
    }
  };
  extend(1);
  return out;
}

std::int64_t WindowRun::incorrect() const {
  return std::count_if(deliveries.begin(), deliveries.end(),
                       [](const Delivery& d) { return d.fake; });
}

std::int64_t WindowRun::correct() const {
  return static_cast<std::int64_t>(deliveries.size()) - incorrect();
}

namespace {

// Time is doubled so a single fine tick can stand in for an arbitrarily
// small epsilon next to integer-valued durations.
constexpr Tick kScale = 2;

}  // namespace

WindowRun simulate_window(const bounds::BoundsInput& in, int n, Value correct_value,
                          Value fake_value, std::int64_t fake_budget) {
  bounds::check(in);
  if (n < 1) throw ConfigError("need at least one server");
  if (in.f > 1) throw ConfigError("window simulation is defined for a single agent");

  const Dur d = kScale * in.delta;
  const Dur D = kScale * in.Delta;
  const Dur g = kScale * in.gamma;
  const Dur tr = kScale * in.tr;
  const bool cum = in.model == Model::kCum;
  const bool agent = in.f == 1;

  const Tick base = (n + bounds::ceil_div(g, D) + 2) * D;
  const Tick horizon = base + 3 * D + tr + g + d;
  mob::FailureTimeline tl(n, horizon);
  if (agent) {
    tl = mob::derive_timeline(mob::generate_sstar(n, 1, D, horizon), n, horizon);
    for (int s = 0; s < n; ++s) {
      for (const auto& c : tl.cured_spans(s)) {
        if (c.departed + g < c.end) tl.mark_correct(s, c.departed + g);
      }
    }
  }

  auto first_at = [&](auto pred) {
    for (Tick t = base;; ++t) {
      if (pred(t)) return t;
    }
  };
  Tick t = first_at([&](Tick x) { return (x + 1) % D == 0; });
  if (cum) {
    Tick late = first_at([&](Tick x) { return (x + tr - 1) % D == 0; });
    bool someone_cured = false;
    for (int s = 0; s < n; ++s) someone_cured = someone_cured || tl.cured_at(s, late);
    if (someone_cured) t = late;
  }

  auto correct_through = [&](int s, Tick from, Tick to) {
    for (Tick x = from; x <= to; ++x) {
      if (tl.label_at(s, x) != mob::Label::kCorrect) return false;
    }
    return true;
  };

  sim::Engine engine;
  sim::DelayPolicy policy(sim::DelayKind::kAdversarial, d);
  policy.set_faulty_predicate([&](int s, Tick at) {
    return tl.byzantine_at(s, at) || (cum && at == t && tl.cured_at(s, t));
  });
  sim::Network net(engine, n, std::move(policy));

  WindowRun run;
  run.t = t;
  const ValueEntry good{correct_value, 1};
  const ValueEntry bad{fake_value, 1};

  net.set_receiver([&](const sim::Envelope& env) {
    if (env.recipient.is_client()) {
      const auto& reply = std::get<ReplyMsg>(env.payload);
      run.deliveries.push_back({env.sender.index, reply.entries.front().value,
                                reply.entries.front() == bad && !(good == bad),
                                env.sent_at, env.deliver_at});
      return;
    }
    int s = env.recipient.index;
    if (std::holds_alternative<ReadMsg>(env.payload) && correct_through(s, t, engine.now())) {
      net.unicast(ProcessId::server(s), ProcessId::client(0), ReplyMsg{s, {good}});
    }
  });

  for (int s = 0; s < n; ++s) {
    std::optional<Tick> fake_at;
    if (cum && tl.cured_at(s, t)) fake_at = t;
    for (Tick x = t; x <= t + tr && !fake_at; ++x) {
      if (tl.byzantine_at(s, x)) fake_at = x;
    }
    if (fake_at) {
      engine.schedule(*fake_at, [&, s] {
        if (fake_budget == 0) return;
        if (fake_budget > 0) --fake_budget;
        net.unicast(ProcessId::server(s), ProcessId::client(0), ReplyMsg{s, {bad}});
      });
    }
    // A server finishing its cure inside the window answers the ongoing read.
    for (const auto& c : tl.cured_spans(s)) {
      if (c.resolved && c.end > t && c.end <= t + tr - d) {
        engine.schedule(c.end, [&, s] {
          net.unicast(ProcessId::server(s), ProcessId::client(0), ReplyMsg{s, {good}});
        });
      }
    }
  }
  engine.schedule(t, [&] { net.broadcast(ProcessId::client(0), ReadMsg{0}); },
                  sim::Phase::kProbe);
  engine.run_until(t + tr);
  return run;
}

bounds::ReplyCounts enumerate_reply_sets(const bounds::BoundsInput& in, int n) {
  if (in.f == 0) return {0, n};
  auto run = simulate_window(in, n, 1, 2);
  return {run.incorrect(), run.correct()};
}

std::optional<AttackPlan> build_attack(int n, const bounds::BoundsInput& in) {
  if (in.f != 1) throw ConfigError("the attack is built for a single agent");
  auto run = simulate_window(in, n, 1, 2);
  AttackPlan plan;
  plan.in = in;
  plan.n = n;
  plan.window_start = run.t;
  plan.max_incorrect = run.incorrect();
  plan.min_correct = run.correct();
  if (plan.min_correct > plan.max_incorrect) return std::nullopt;
  plan.fake_budget = plan.min_correct;
  return plan;
}

namespace {
Execution execute(const AttackPlan& plan, Value correct, Value fake) {
  auto run = simulate_window(plan.in, plan.n, correct, fake, plan.fake_budget);
  Execution e;
  e.correct_value = correct;
  std::map<int, std::int64_t> per_sender;
  for (const auto& d : run.deliveries) {
    ++e.value_counts[d.value];
    ++per_sender[d.sender];
  }
  for (const auto& [s, c] : per_sender) e.sender_profile.push_back(c);
  std::sort(e.sender_profile.rbegin(), e.sender_profile.rend());
  e.deliveries = std::move(run.deliveries);
  return e;
}
}  // namespace

AttackOutcome simulate_attack(const AttackPlan& plan) {
  AttackOutcome out;
  out.e0 = execute(plan, plan.v0, plan.v1);
  out.e1 = execute(plan, plan.v1, plan.v0);
  out.values_differ = out.e0.correct_value != out.e1.correct_value;
  out.indistinguishable = out.e0.value_counts == out.e1.value_counts &&
                          out.e0.sender_profile == out.e1.sender_profile;
  return out;
}

std::vector<std::int64_t> occurrence_profile(int n, std::int64_t x) {
  if (n < 1) throw ConfigError("need at least one sender");
  std::vector<std::int64_t> counts(static_cast<std::size_t>(n), 0);
  if (x == 0) return counts;
  // One message per dwell, each sent by the agent's current host.
  auto tl = mob::derive_timeline(mob::generate_sstar(n, 1, 1, x), n, x);
  for (Tick i = 0; i < x; ++i) {
    for (int s = 0; s < n; ++s) {
      if (tl.byzantine_at(s, i)) ++counts[static_cast<std::size_t>(s)];
    }
  }
  std::sort(counts.rbegin(), counts.rend());
  return counts;
}

CompositionReport sweep_composition_identity(int n_max, std::int64_t x_max) {
  CompositionReport rep;
  for (int n = 1; n <= n_max; ++n) {
    for (std::int64_t x = 0; x <= x_max; ++x) {
      auto prof = occurrence_profile(n, x);
      std::int64_t high = x % n;
      bool ok = true;
      for (std::int64_t i = 0; i < n; ++i) {
        std::int64_t expect = x / n + (i < high ? 1 : 0);
        ok = ok && prof[static_cast<std::size_t>(i)] == expect;
      }
      ++rep.checked;
      if (!ok) ++rep.failures;
    }
  }
  return rep;
}

}  // namespace mbf::oracle
