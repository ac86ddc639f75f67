#pragma once

#include <functional>
#include <optional>
#include <set>
#include <vector>

#include <json.hpp>

#include "mbf/messages.hpp"
#include "mbf/mobility.hpp"
#include "mbf/simclock.hpp"
#include "mbf/thresholds.hpp"
#include "mbf/types.hpp"

namespace mbf::proto {

struct ServerEnv {
  sim::Engine* engine = nullptr;
  sim::Network* net = nullptr;
  int n = 0;
  Dur delta = 1;
  Thresholds th;
  std::uint64_t seed = 0;
  // Called when the server's state is valid again after an agent left.
  std::function<void(int server, Tick at)> on_correct;
};

// A forged entry never carries a writer value (writers only use positive
// values, the initial value is 0).
inline bool forged(const ValueEntry& e) { return e.value < 0; }

class Server {
 public:
  Server(int id, ServerEnv env);
  virtual ~Server() = default;
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  int id() const { return id_; }
  bool byzantine() const { return strategy_.has_value(); }

  virtual void start() {}
  void deliver(const sim::Envelope& env);
  void capture(const mob::ByzStrategy& strategy);
  void release();

  // Pairs the server would put in a REPLY right now.
  virtual std::vector<ValueEntry> reply_source() const = 0;
  virtual nlohmann::json snapshot() const = 0;

 protected:
  virtual void on_message(const sim::Envelope& env) = 0;
  virtual void on_byz_message(const sim::Envelope& env) = 0;
  virtual void on_capture() = 0;
  // Runs with the server already back under correct code; `left_by` is the
  // strategy of the departing agent, which may have tampered with state.
  virtual void on_release(const mob::ByzStrategy& left_by) = 0;

  Tick now() const { return env_.engine->now(); }
  void send(ProcessId to, const Payload& payload);
  void broadcast(const Payload& payload);
  ProcessId self() const { return ProcessId::server(id_); }

  // Pairs a strategy pushes in replies and echoes. Empty for Silent.
  std::vector<ValueEntry> forged_pairs(const mob::ByzStrategy& s);
  std::vector<ValueEntry> forged_pairs() { return forged_pairs(*strategy_); }
  const mob::ByzStrategy& strategy() const { return *strategy_; }

  int id_;
  ServerEnv env_;
  sim::Rng rng_;      // protocol randomness (nonces)
  sim::Rng byz_rng_;  // adversary randomness, reseeded per capture
  std::optional<mob::ByzStrategy> strategy_;
  std::uint64_t captures_ = 0;
};

nlohmann::json to_json(const std::vector<ValueEntry>& entries);

}  // namespace mbf::proto
