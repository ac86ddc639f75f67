#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mbf/mobility.hpp"
#include "mbf/types.hpp"

namespace mbf::checker {

enum class OpKind { kWrite, kRead };

struct OpRecord {
  OpKind kind = OpKind::kRead;
  int client = 0;
  Tick t_b = 0;
  Tick t_e = 0;
  Value value = 0;
  SeqNo sn = 0;
  bool no_quorum = false;
  bool complete = false;  // false for operations cut short by a client crash

  ValueEntry entry() const { return {value, sn}; }
  bool operator==(const OpRecord&) const = default;
};

class History {
 public:
  void add(const OpRecord& op) { ops_.push_back(op); }
  const std::vector<OpRecord>& ops() const { return ops_; }
  std::vector<OpRecord> writes() const;  // ordered by sn
  std::vector<OpRecord> reads() const;
  std::size_t size() const { return ops_.size(); }

 private:
  std::vector<OpRecord> ops_;
};

nlohmann::json to_json(const OpRecord& op);
OpRecord op_from_json(const nlohmann::json& j);

struct Violation {
  std::size_t op = 0;  // index into History::ops()
  std::string reason;
};

// Each complete read must return the value of the last write that precedes
// it, or of a write it overlaps. Before any write the initial entry counts
// as written.
std::vector<Violation> check_validity(const History& h);

// Writes last exactly delta, reads exactly 2*delta; a read without a quorum
// is reported too.
std::vector<Violation> check_termination(const History& h, Dur delta);

struct GammaReport {
  Dur max_span = 0;  // resolved spans, plus lower bounds from unfinished ones
  std::size_t resolved = 0;
  std::size_t interrupted = 0;  // agent came back before the cure finished
  std::size_t open = 0;         // still cured when the run ended
};

// Open spans are measured up to `end_of_run`.
GammaReport measure_gamma(const mob::FailureTimeline& timeline, Tick end_of_run);
GammaReport measure_gamma(const std::vector<mob::CuredSpan>& spans, Tick end_of_run);

}  // namespace mbf::checker
