#pragma once

#include <set>

#include "mbf/server.hpp"
#include "mbf/vset.hpp"

namespace mbf::proto {

// Cured-aware server. Maintenance runs on demand: it starts on the tick the
// agent leaves and lasts exactly 2*delta.
class CamServer : public Server {
 public:
  CamServer(int id, ServerEnv env);

  std::vector<ValueEntry> reply_source() const override { return v_.entries(); }
  nlohmann::json snapshot() const override;

  const VSet& v() const { return v_; }
  bool curing_state() const { return curing_state_; }
  const std::set<int>& pending_read() const { return pending_read_; }
  const std::set<int>& curing() const { return curing_; }

  // Test hooks that bypass the network.
  void set_v(const VSet& v) { v_ = v; }

 protected:
  void on_message(const sim::Envelope& env) override;
  void on_byz_message(const sim::Envelope& env) override;
  void on_capture() override;
  void on_release(const mob::ByzStrategy& left_by) override;

 private:
  void start_maintenance();
  void finish_maintenance();

  VSet v_;
  std::set<int> pending_read_;
  std::set<int> curing_;
  SenderTally echo_vals_;
  bool cured_ = false;
  bool curing_state_ = false;
  std::uint64_t epoch_ = 0;  // bumped on capture to cancel pending waits
};

}  // namespace mbf::proto
