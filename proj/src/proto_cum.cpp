#include "mbf/proto_cum.hpp"

#include <algorithm>

namespace mbf::proto {

CumServer::CumServer(int id, ServerEnv env, Tick phase_offset)
    : Server(id, std::move(env)), phase_(phase_offset) {
  if (phase_ < 0 || phase_ >= 2 * env_.delta) {
    throw ConfigError("maintenance phase offset must lie in [0, 2*delta)");
  }
  v_.insert(kInitialEntry);
  v_safe_.insert(kInitialEntry);
}

void CumServer::start() { schedule_cycle(phase_); }

void CumServer::schedule_cycle(Tick at) {
  auto gen = ++cycle_gen_;
  env_.engine->schedule(at, [this, gen] {
    if (gen != cycle_gen_) return;
    schedule_cycle(now() + 2 * env_.delta);
    if (byzantine()) {
      cycle_started_clean_ = false;
      return;
    }
    cycle_start();
  });
}

void CumServer::cycle_start() {
  timer_check();
  // The cycle that just ended completes a cure if it started clean.
  if (cure_pending_ && cycle_started_clean_) clean_cycle_done_ = true;

  echo_vals_.clear();
  v_ = v_safe_;
  v_safe_.clear();
  rand_ = rng_.next();
  cycle_started_clean_ = true;
  broadcast(EchoReqMsg{id_, rand_});
  maybe_cured();
}

void CumServer::timer_check() {
  Tick t = now();
  Dur limit = 4 * env_.delta;
  std::erase_if(w_, [&](const TimedEntry& e) {
    return e.expires_at <= t || e.expires_at - t > limit;
  });
}

std::vector<ValueEntry> CumServer::w_pairs() const {
  std::vector<ValueEntry> out;
  for (const auto& e : w_) out.push_back(e.entry);
  return out;
}

std::vector<ValueEntry> CumServer::reply_source() const {
  return con_cut(v_.entries(), v_safe_.entries(), w_pairs());
}

void CumServer::evaluate_selection() {
  auto picked = select_three_pairs_max_sn(echo_vals_, static_cast<std::size_t>(env_.th.echo_q));
  if (!picked) return;
  VSet before = v_safe_;
  v_safe_.insert_all(*picked);
  if (v_safe_ == before) return;
  std::set<int> readers = pending_read_;
  readers.insert(echo_read_.begin(), echo_read_.end());
  for (int c : readers) send(ProcessId::client(c), ReplyMsg{id_, v_safe_.entries()});
}

void CumServer::on_message(const sim::Envelope& env) {
  timer_check();
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, WriteMsg>) {
          ValueEntry pair{m.value, m.csn};
          bool known = std::any_of(w_.begin(), w_.end(),
                                   [&](const TimedEntry& e) { return e.entry == pair; });
          if (!known) w_.push_back({pair, now() + 4 * env_.delta});
          std::set<int> readers = pending_read_;
          readers.insert(echo_read_.begin(), echo_read_.end());
          for (int c : readers) send(ProcessId::client(c), ReplyMsg{id_, {pair}});
          // The write-time echo carries no nonce, so every receiver would drop
          // it; correct servers keep no nonces to attach. Not sent.
        } else if constexpr (std::is_same_v<M, ReadMsg>) {
          pending_read_.insert(m.client);
          send(ProcessId::client(m.client), ReplyMsg{id_, reply_source()});
          broadcast(ReadFwMsg{m.client});
        } else if constexpr (std::is_same_v<M, ReadFwMsg>) {
          pending_read_.insert(m.client);
        } else if constexpr (std::is_same_v<M, ReadAckMsg>) {
          pending_read_.erase(m.client);
          echo_read_.erase(m.client);
        } else if constexpr (std::is_same_v<M, EchoMsg>) {
          if (!rand_ || m.nonce != rand_ || m.bottom) return;
          echo_vals_.add_all(m.server, m.entries);
          echo_read_.insert(m.pending_reads.begin(), m.pending_reads.end());
          evaluate_selection();
        } else if constexpr (std::is_same_v<M, EchoReqMsg>) {
          if (!m.nonce) return;
          auto payload = v_.entries();
          for (const auto& e : w_pairs()) {
            if (std::find(payload.begin(), payload.end(), e) == payload.end()) payload.push_back(e);
          }
          std::vector<int> pr(pending_read_.begin(), pending_read_.end());
          send(ProcessId::server(m.server), EchoMsg{id_, payload, false, pr, m.nonce});
        }
      },
      env.payload);
}

void CumServer::on_byz_message(const sim::Envelope& env) {
  if (strategy().kind == mob::StrategyKind::kSilent) return;
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, ReadMsg>) {
          pending_read_.insert(m.client);
          send(ProcessId::client(m.client), ReplyMsg{id_, forged_pairs()});
        } else if constexpr (std::is_same_v<M, ReadFwMsg>) {
          pending_read_.insert(m.client);
        } else if constexpr (std::is_same_v<M, ReadAckMsg>) {
          pending_read_.erase(m.client);
          echo_read_.erase(m.client);
        } else if constexpr (std::is_same_v<M, EchoReqMsg>) {
          if (!m.nonce) return;
          last_nonce_[m.server] = *m.nonce;
          send(ProcessId::server(m.server), EchoMsg{id_, forged_pairs(), false, {}, m.nonce});
        }
      },
      env.payload);
}

void CumServer::on_capture() {
  // Correct code stores no nonces, so the agent starts with none.
  last_nonce_.clear();
  cure_pending_ = false;
  clean_cycle_done_ = false;
  cycle_started_clean_ = false;
  if (strategy().kind == mob::StrategyKind::kSilent) return;
  std::set<int> readers = pending_read_;
  readers.insert(echo_read_.begin(), echo_read_.end());
  for (int c : readers) send(ProcessId::client(c), ReplyMsg{id_, forged_pairs()});
  for (const auto& [s, r] : last_nonce_) {
    send(ProcessId::server(s), EchoMsg{id_, forged_pairs(), false, {}, r});
  }
}

void CumServer::on_release(const mob::ByzStrategy& left_by) {
  last_nonce_.clear();
  cure_pending_ = true;
  clean_cycle_done_ = false;
  Tick t = now();
  Dur d = env_.delta;
  switch (left_by.kind) {
    case mob::StrategyKind::kSilent:
      break;
    case mob::StrategyKind::kEchoFixedValue:
    case mob::StrategyKind::kMirror: {
      ValueEntry bad{left_by.value, left_by.sn};
      v_.clear();
      v_.insert(bad);
      v_safe_.clear();
      v_safe_.insert(bad);
      w_.assign({{bad, t + 4 * d}});
      echo_vals_.clear();
      for (int s = 0; s < env_.th.echo_q; ++s) echo_vals_.add(s, bad);
      rand_ = byz_rng_.next();
      cycle_started_clean_ = false;
      // Push the next clean cycle as late as the timer allows.
      schedule_cycle(t + 2 * d);
      break;
    }
    case mob::StrategyKind::kRandomGarbage: {
      auto junk = [&] { return forged_pairs(left_by); };
      v_.clear();
      v_.insert_all(junk());
      v_safe_.clear();
      v_safe_.insert_all(junk());
      w_.clear();
      for (const auto& e : junk()) w_.push_back({e, t + byz_rng_.uniform(1, 10 * d)});
      echo_vals_.clear();
      for (const auto& e : junk()) {
        for (int s = 0; s < env_.n; ++s) {
          if (byz_rng_.chance(0.5)) echo_vals_.add(s, e);
        }
      }
      rand_ = byz_rng_.next();
      cycle_started_clean_ = false;
      schedule_cycle(t + byz_rng_.uniform(1, 2 * d));
      break;
    }
  }
  timer_check();
  evaluate_selection();
}

bool CumServer::state_clean() const {
  auto bad = [](const ValueEntry& e) { return forged(e); };
  return std::none_of(v_.entries().begin(), v_.entries().end(), bad) &&
         std::none_of(v_safe_.entries().begin(), v_safe_.entries().end(), bad) &&
         std::none_of(w_.begin(), w_.end(), [](const TimedEntry& e) { return forged(e.entry); });
}

void CumServer::maybe_cured() {
  if (!cure_pending_ || !clean_cycle_done_) return;
  if (state_clean()) {
    cure_pending_ = false;
    if (env_.on_correct) env_.on_correct(id_, now());
    return;
  }
  // Forged W entries with a compliant timer linger until they expire.
  Tick latest = 0;
  for (const auto& e : w_) {
    if (forged(e.entry)) latest = std::max(latest, e.expires_at);
  }
  if (latest > now()) {
    env_.engine->schedule(latest, [this] {
      if (byzantine()) return;
      timer_check();
      maybe_cured();
    });
  }
}

nlohmann::json CumServer::snapshot() const {
  auto w = nlohmann::json::array();
  for (const auto& e : w_) w.push_back({e.entry.value, e.entry.sn, e.expires_at});
  return {{"server", id_},
          {"byz", byzantine()},
          {"V", to_json(v_.entries())},
          {"V_safe", to_json(v_safe_.entries())},
          {"W", w}};
}

}  // namespace mbf::proto
