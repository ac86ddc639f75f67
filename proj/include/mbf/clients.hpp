#pragma once

#include <functional>
#include <optional>

#include "mbf/checker.hpp"
#include "mbf/simclock.hpp"
#include "mbf/vset.hpp"

namespace mbf::clients {

class SwmrViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The single writer. Each write completes exactly delta ticks after it is
// invoked, whatever the servers do.
class Writer {
 public:
  Writer(int id, sim::Network& net, Dur delta, checker::History* history);

  // Throws SwmrViolation while another write is in flight.
  void write(Value v);
  bool busy() const { return in_flight_.has_value(); }
  SeqNo csn() const { return csn_; }

 private:
  int id_;
  sim::Network& net_;
  Dur delta_;
  checker::History* history_;
  SeqNo csn_ = 0;
  std::optional<checker::OpRecord> in_flight_;
};

class Reader {
 public:
  Reader(int id, sim::Network& net, Dur delta, int reply_q, checker::History* history);

  // A reader runs one read at a time; a second invocation while busy throws.
  void read();
  void on_reply(const sim::Envelope& env);
  bool busy() const { return in_flight_.has_value(); }
  int id() const { return id_; }

  // Replies collected by the read in flight, or the last one completed.
  const SenderTally& replies() const { return replies_; }
  // Observer for every accepted REPLY (used by statistics and the attack).
  void set_reply_observer(std::function<void(const sim::Envelope&)> fn) {
    on_reply_ = std::move(fn);
  }
  // Called after each read completes, with the replies it collected.
  void set_done_observer(std::function<void(const checker::OpRecord&, const SenderTally&)> fn) {
    on_done_ = std::move(fn);
  }

 private:
  void finish();

  int id_;
  sim::Network& net_;
  Dur delta_;
  int reply_q_;
  checker::History* history_;
  SenderTally replies_;
  std::optional<checker::OpRecord> in_flight_;
  std::function<void(const sim::Envelope&)> on_reply_;
  std::function<void(const checker::OpRecord&, const SenderTally&)> on_done_;
};

}  // namespace mbf::clients
