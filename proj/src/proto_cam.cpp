#include "mbf/proto_cam.hpp"

namespace mbf::proto {

CamServer::CamServer(int id, ServerEnv env) : Server(id, std::move(env)) {
  v_.insert(kInitialEntry);
}

void CamServer::on_message(const sim::Envelope& env) {
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, WriteMsg>) {
          ValueEntry pair{m.value, m.csn};
          v_.insert(pair);
          for (int c : pending_read_) send(ProcessId::client(c), ReplyMsg{id_, {pair}});
          for (int s : curing_) send(ProcessId::server(s), EchoMsg{id_, v_.entries()});
        } else if constexpr (std::is_same_v<M, ReadMsg>) {
          pending_read_.insert(m.client);
          if (!v_.empty()) send(ProcessId::client(m.client), ReplyMsg{id_, v_.entries()});
        } else if constexpr (std::is_same_v<M, ReadAckMsg>) {
          pending_read_.erase(m.client);
        } else if constexpr (std::is_same_v<M, EchoMsg>) {
          if (!curing_state_) return;
          if (m.bottom) {
            // The second bottom always lands after anything the sender
            // forged while Byzantine, so dropping what it sent so far is enough.
            echo_vals_.erase_sender(m.server);
          } else {
            echo_vals_.add_all(m.server, m.entries);
          }
        } else if constexpr (std::is_same_v<M, EchoReqMsg>) {
          curing_.insert(m.server);
          if (!v_.empty()) send(ProcessId::server(m.server), EchoMsg{id_, v_.entries()});
        }
        // REPLY and READ_FW are not addressed to CAM servers.
      },
      env.payload);
}

void CamServer::on_byz_message(const sim::Envelope& env) {
  if (strategy().kind == mob::StrategyKind::kSilent) return;
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, ReadMsg>) {
          pending_read_.insert(m.client);
          send(ProcessId::client(m.client), ReplyMsg{id_, forged_pairs()});
        } else if constexpr (std::is_same_v<M, ReadAckMsg>) {
          pending_read_.erase(m.client);
        } else if constexpr (std::is_same_v<M, EchoReqMsg>) {
          curing_.insert(m.server);
          send(ProcessId::server(m.server), EchoMsg{id_, forged_pairs()});
        }
      },
      env.payload);
}

void CamServer::on_capture() {
  ++epoch_;
  curing_state_ = false;
  if (strategy().kind == mob::StrategyKind::kSilent) return;
  for (int c : pending_read_) send(ProcessId::client(c), ReplyMsg{id_, forged_pairs()});
  broadcast(EchoMsg{id_, forged_pairs()});
}

void CamServer::on_release(const mob::ByzStrategy& left_by) {
  // Whatever the agent left behind is wiped by maintenance.
  if (left_by.kind != mob::StrategyKind::kSilent) {
    v_.clear();
    v_.insert_all(forged_pairs(left_by));
  }
  cured_ = true;
  start_maintenance();
}

void CamServer::start_maintenance() {
  if (!cured_) return;
  cured_ = false;
  curing_state_ = true;
  v_.clear();
  echo_vals_.clear();
  pending_read_.clear();
  curing_.clear();
  broadcast(EchoReqMsg{id_, std::nullopt});

  // awareAll runs alongside the 2*delta wait.
  EchoMsg bottom{id_, {}, true, {}, std::nullopt};
  broadcast(bottom);
  auto epoch = epoch_;
  env_.engine->schedule_after(env_.delta, [this, epoch, bottom] {
    if (epoch == epoch_ && !byzantine()) broadcast(bottom);
  });
  env_.engine->schedule_after(2 * env_.delta, [this, epoch] {
    if (epoch == epoch_ && !byzantine()) finish_maintenance();
  });
}

void CamServer::finish_maintenance() {
  auto picked = select_pairs_max_sn(echo_vals_, static_cast<std::size_t>(env_.th.echo_q), 3);
  v_.insert_all(picked);
  for (int s : curing_) send(ProcessId::server(s), EchoMsg{id_, v_.entries()});
  // Readers that arrived during maintenance got nothing so far.
  if (!v_.empty()) {
    for (int c : pending_read_) send(ProcessId::client(c), ReplyMsg{id_, v_.entries()});
  }
  curing_state_ = false;
  if (env_.on_correct) env_.on_correct(id_, now());
}

nlohmann::json CamServer::snapshot() const {
  return {{"server", id_},
          {"byz", byzantine()},
          {"curing", curing_state_},
          {"V", to_json(v_.entries())}};
}

}  // namespace mbf::proto
