#include "mbf/simclock.hpp"

#include <stdexcept>

namespace mbf::sim {

EventId Engine::schedule(Tick at, Callback callback, Phase phase) {
  if (at < now_) {
    throw std::logic_error("cannot schedule at tick " + std::to_string(at) +
                           " (now " + std::to_string(now_) + ")");
  }
  EventId id = next_seq_++;
  queue_.push(Event{at, phase, id, std::move(callback)});
  return id;
}

bool Engine::step() {
  if (queue_.empty()) return false;
  // priority_queue::top is const; the callback is copied out before pop.
  Event ev = queue_.top();
  queue_.pop();
  now_ = ev.at;
  ++executed_;
  ev.callback();
  return true;
}

void Engine::run_until(Tick t) {
  if (t < now_) throw std::logic_error("run_until into the past");
  while (!queue_.empty() && queue_.top().at <= t) step();
  now_ = t;
}

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("empty range");
  auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(gen_());
  // Rejection sampling keeps the draw unbiased and platform independent.
  std::uint64_t limit = UINT64_MAX - (UINT64_MAX % span);
  std::uint64_t x;
  do {
    x = gen_();
  } while (x >= limit);
  return lo + static_cast<std::int64_t>(x % span);
}

DelayKind parse_delay_kind(const std::string& text) {
  if (text == "fixed" || text == "fixed-max" || text == "max") return DelayKind::kFixedMax;
  if (text == "uniform" || text == "seeded-uniform") return DelayKind::kSeededUniform;
  if (text == "adversarial") return DelayKind::kAdversarial;
  throw ConfigError("unknown delay policy '" + text + "'");
}

std::string to_string(DelayKind kind) {
  switch (kind) {
    case DelayKind::kFixedMax: return "fixed";
    case DelayKind::kSeededUniform: return "uniform";
    case DelayKind::kAdversarial: return "adversarial";
  }
  return "?";
}

DelayPolicy::DelayPolicy(DelayKind kind, Dur delta, std::uint64_t seed)
    : kind_(kind), delta_(delta), rng_(seed) {
  if (delta < 1) throw ConfigError("delta must be at least 1 tick");
}

Dur DelayPolicy::delay(ProcessId from, ProcessId to, Tick sent_at) {
  switch (kind_) {
    case DelayKind::kFixedMax:
      return delta_;
    case DelayKind::kSeededUniform:
      return rng_.uniform(1, delta_);
    case DelayKind::kAdversarial:
      return faulty(from, sent_at) || faulty(to, sent_at) ? 1 : delta_;
  }
  return delta_;
}

Network::Network(Engine& engine, int servers, DelayPolicy policy)
    : engine_(engine), servers_(servers), policy_(std::move(policy)) {
  if (servers < 1) throw ConfigError("need at least one server");
}

void Network::broadcast(ProcessId sender, const Payload& payload) {
  for (int i = 0; i < servers_; ++i) unicast(sender, ProcessId::server(i), payload);
}

void Network::unicast(ProcessId sender, ProcessId to, const Payload& payload) {
  if (auto claimed = claimed_server(payload)) {
    if (!sender.is_server() || *claimed != sender.index) {
      throw std::logic_error("payload origin does not match authenticated sender");
    }
  }
  if (to.is_server() && (to.index < 0 || to.index >= servers_)) {
    throw std::out_of_range("no such server " + std::to_string(to.index));
  }
  Envelope env;
  env.id = sent_++;
  env.sender = sender;
  env.recipient = to;
  env.payload = payload;
  env.sent_at = engine_.now();
  env.deliver_at = env.sent_at + policy_.delay(sender, to, env.sent_at);
  if (on_send_) on_send_(env);
  engine_.schedule(
      env.deliver_at,
      [this, env = std::move(env)]() {
        ++delivered_;
        if (receiver_) receiver_(env);
      },
      Phase::kDeliver);
}

}  // namespace mbf::sim
