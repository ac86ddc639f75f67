#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <random>
#include <vector>

#include "mbf/messages.hpp"
#include "mbf/types.hpp"

namespace mbf::sim {

// Events at the same tick run in phase order, then in insertion order.
// Agent moves settle first so deliveries and timers at a tick observe the
// failure state of that tick; probes observe the fully settled tick.
enum class Phase : int { kAgent = 0, kDeliver = 1, kTimer = 2, kProbe = 3 };

using EventId = std::uint64_t;

class Engine {
 public:
  using Callback = std::function<void()>;

  // Rejects `at < now()`.
  EventId schedule(Tick at, Callback callback, Phase phase = Phase::kTimer);
  EventId schedule_after(Dur delay, Callback callback, Phase phase = Phase::kTimer) {
    return schedule(now_ + delay, std::move(callback), phase);
  }

  // Executes every event with time <= t, then parks the clock at t.
  void run_until(Tick t);
  // Executes the next event; false when the queue is empty.
  bool step();

  Tick now() const { return now_; }
  std::size_t pending() const { return queue_.size(); }
  std::uint64_t executed() const { return executed_; }

 private:
  struct Event {
    Tick at;
    Phase phase;
    EventId seq;
    Callback callback;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.at != b.at) return a.at > b.at;
      if (a.phase != b.phase) return a.phase > b.phase;
      return a.seq > b.seq;
    }
  };

  Tick now_ = 0;
  EventId next_seq_ = 0;
  std::uint64_t executed_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
};

// Deterministic 64-bit generator. Draws are derived from raw mt19937_64
// output so results do not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::uint64_t next() { return gen_(); }
  // Uniform in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 gen_;
};

enum class DelayKind { kFixedMax, kSeededUniform, kAdversarial };

DelayKind parse_delay_kind(const std::string& text);
std::string to_string(DelayKind kind);

// Produces per-envelope delays in [1, delta].
class DelayPolicy {
 public:
  // True when the server is controlled by the adversary at the given tick.
  using FaultyPredicate = std::function<bool(int server, Tick at)>;

  DelayPolicy(DelayKind kind, Dur delta, std::uint64_t seed = 0);

  void set_faulty_predicate(FaultyPredicate predicate) { faulty_ = std::move(predicate); }

  Dur delay(ProcessId from, ProcessId to, Tick sent_at);

  DelayKind kind() const { return kind_; }
  Dur delta() const { return delta_; }

 private:
  bool faulty(ProcessId id, Tick at) const {
    return id.is_server() && faulty_ && faulty_(id.index, at);
  }

  DelayKind kind_;
  Dur delta_;
  Rng rng_;
  FaultyPredicate faulty_;
};

struct Envelope {
  std::uint64_t id = 0;
  ProcessId sender;
  ProcessId recipient;
  Payload payload;
  Tick sent_at = 0;
  Tick deliver_at = 0;
};

// Authenticated reliable channels: every envelope is delivered exactly once,
// within delta ticks, carrying the true sender.
class Network {
 public:
  using Receiver = std::function<void(const Envelope&)>;
  using Observer = std::function<void(const Envelope&)>;

  Network(Engine& engine, int servers, DelayPolicy policy);

  void set_receiver(Receiver receiver) { receiver_ = std::move(receiver); }
  void set_send_observer(Observer observer) { on_send_ = std::move(observer); }

  // One envelope per server, the sender included when it is a server.
  void broadcast(ProcessId sender, const Payload& payload);
  void unicast(ProcessId sender, ProcessId to, const Payload& payload);

  std::uint64_t sent() const { return sent_; }
  std::uint64_t delivered() const { return delivered_; }
  int servers() const { return servers_; }
  DelayPolicy& policy() { return policy_; }
  Engine& engine() { return engine_; }

 private:
  Engine& engine_;
  int servers_;
  DelayPolicy policy_;
  Receiver receiver_;
  Observer on_send_;
  std::uint64_t sent_ = 0;
  std::uint64_t delivered_ = 0;
};

}  // namespace mbf::sim
