#pragma once

#include <map>
#include <set>

#include "mbf/server.hpp"
#include "mbf/vset.hpp"

namespace mbf::proto {

struct TimedEntry {
  ValueEntry entry;
  Tick expires_at = 0;
  bool operator==(const TimedEntry&) const = default;
};

// Cured-unaware server. Maintenance restarts every 2*delta at a per-server
// phase offset and guards echoes with a fresh nonce per cycle.
class CumServer : public Server {
 public:
  CumServer(int id, ServerEnv env, Tick phase_offset);

  void start() override;

  std::vector<ValueEntry> reply_source() const override;
  nlohmann::json snapshot() const override;

  const VSet& v() const { return v_; }
  const VSet& v_safe() const { return v_safe_; }
  const std::vector<TimedEntry>& w() const { return w_; }
  const std::set<int>& pending_read() const { return pending_read_; }
  const std::set<int>& echo_read() const { return echo_read_; }
  std::optional<Nonce> nonce() const { return rand_; }
  Tick phase_offset() const { return phase_; }

  // Removes expired entries and entries whose timer exceeds 4*delta.
  void timer_check();

  // Test hooks.
  void plant_w(const TimedEntry& e) { w_.push_back(e); }

 protected:
  void on_message(const sim::Envelope& env) override;
  void on_byz_message(const sim::Envelope& env) override;
  void on_capture() override;
  void on_release(const mob::ByzStrategy& left_by) override;

 private:
  void schedule_cycle(Tick at);
  void cycle_start();
  void evaluate_selection();
  std::vector<ValueEntry> w_pairs() const;
  bool state_clean() const;
  void maybe_cured();

  Tick phase_;
  VSet v_;
  VSet v_safe_;
  std::vector<TimedEntry> w_;
  std::set<int> pending_read_;
  std::set<int> echo_read_;
  SenderTally echo_vals_;
  std::optional<Nonce> rand_;
  std::map<int, Nonce> last_nonce_;  // nonces learned while Byzantine

  std::uint64_t cycle_gen_ = 0;
  bool cycle_started_clean_ = false;
  // Set while the server is cured: from departure until the state is valid.
  bool cure_pending_ = false;
  bool clean_cycle_done_ = false;
};

}  // namespace mbf::proto
