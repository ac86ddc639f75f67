#include "mbf/server.hpp"

namespace mbf::proto {

namespace {
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace

Server::Server(int id, ServerEnv env)
    : id_(id),
      env_(std::move(env)),
      rng_(mix(env_.seed ^ mix(static_cast<std::uint64_t>(id) + 1))),
      byz_rng_(0) {}

void Server::deliver(const sim::Envelope& env) {
  if (byzantine()) {
    on_byz_message(env);
  } else {
    on_message(env);
  }
}

void Server::capture(const mob::ByzStrategy& strategy) {
  strategy_ = strategy;
  ++captures_;
  byz_rng_ = sim::Rng(mix(strategy.seed ^ mix(static_cast<std::uint64_t>(id_) << 20 ^ captures_)));
  on_capture();
}

void Server::release() {
  mob::ByzStrategy left_by = *strategy_;
  strategy_.reset();
  on_release(left_by);
}

void Server::send(ProcessId to, const Payload& payload) {
  env_.net->unicast(self(), to, payload);
}

void Server::broadcast(const Payload& payload) { env_.net->broadcast(self(), payload); }

std::vector<ValueEntry> Server::forged_pairs(const mob::ByzStrategy& s) {
  switch (s.kind) {
    case mob::StrategyKind::kSilent:
      return {};
    case mob::StrategyKind::kEchoFixedValue:
    case mob::StrategyKind::kMirror:
      return {{s.value, s.sn}};
    case mob::StrategyKind::kRandomGarbage: {
      std::vector<ValueEntry> out;
      auto count = byz_rng_.uniform(1, 3);
      for (std::int64_t i = 0; i < count; ++i) {
        out.push_back({-byz_rng_.uniform(1, 1000), byz_rng_.uniform(0, 200)});
      }
      return out;
    }
  }
  return {};
}

nlohmann::json to_json(const std::vector<ValueEntry>& entries) {
  auto arr = nlohmann::json::array();
  for (const auto& e : entries) arr.push_back({e.value, e.sn});
  return arr;
}

}  // namespace mbf::proto
