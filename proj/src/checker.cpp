#include "mbf/checker.hpp"

#include <algorithm>

namespace mbf::checker {

std::vector<OpRecord> History::writes() const {
  std::vector<OpRecord> out;
  for (const auto& op : ops_) {
    if (op.kind == OpKind::kWrite) out.push_back(op);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const OpRecord& a, const OpRecord& b) { return a.sn < b.sn; });
  return out;
}

std::vector<OpRecord> History::reads() const {
  std::vector<OpRecord> out;
  for (const auto& op : ops_) {
    if (op.kind == OpKind::kRead) out.push_back(op);
  }
  return out;
}

nlohmann::json to_json(const OpRecord& op) {
  return {{"type", "op"},
          {"kind", op.kind == OpKind::kWrite ? "write" : "read"},
          {"client", op.client},
          {"t_b", op.t_b},
          {"t_e", op.t_e},
          {"value", op.value},
          {"sn", op.sn},
          {"no_quorum", op.no_quorum},
          {"complete", op.complete}};
}

OpRecord op_from_json(const nlohmann::json& j) {
  OpRecord op;
  auto kind = j.at("kind").get<std::string>();
  if (kind == "write") {
    op.kind = OpKind::kWrite;
  } else if (kind == "read") {
    op.kind = OpKind::kRead;
  } else {
    throw ConfigError("unknown op kind '" + kind + "'");
  }
  op.client = j.at("client").get<int>();
  op.t_b = j.at("t_b").get<Tick>();
  op.t_e = j.at("t_e").get<Tick>();
  op.value = j.at("value").get<Value>();
  op.sn = j.at("sn").get<SeqNo>();
  op.no_quorum = j.value("no_quorum", false);
  op.complete = j.value("complete", true);
  return op;
}

std::vector<Violation> check_validity(const History& h) {
  std::vector<OpRecord> writes;
  for (const auto& op : h.ops()) {
    if (op.kind == OpKind::kWrite) writes.push_back(op);
  }
  std::vector<Violation> out;
  const auto& ops = h.ops();
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const auto& r = ops[i];
    if (r.kind != OpKind::kRead || !r.complete || r.no_quorum) continue;

    std::vector<ValueEntry> allowed;
    const OpRecord* last = nullptr;
    for (const auto& w : writes) {
      Tick w_end = w.complete ? w.t_e : mob::kForever;
      bool precedes = w_end < r.t_b;
      bool follows = r.t_e < w.t_b;
      if (precedes) {
        if (!last || w.sn > last->sn) last = &w;
      } else if (!follows) {
        allowed.push_back(w.entry());
      }
    }
    allowed.push_back(last ? last->entry() : kInitialEntry);

    if (std::find(allowed.begin(), allowed.end(), r.entry()) == allowed.end()) {
      std::string reason = "read [" + std::to_string(r.t_b) + "," + std::to_string(r.t_e) +
                           "] by c" + std::to_string(r.client) + " returned " +
                           to_string(r.entry()) + "; allowed:";
      for (const auto& a : allowed) reason += " " + to_string(a);
      out.push_back({i, reason});
    }
  }
  return out;
}

std::vector<Violation> check_termination(const History& h, Dur delta) {
  std::vector<Violation> out;
  const auto& ops = h.ops();
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const auto& op = ops[i];
    if (!op.complete) continue;
    Dur expect = op.kind == OpKind::kWrite ? delta : 2 * delta;
    if (op.t_e - op.t_b != expect) {
      out.push_back({i, std::string(op.kind == OpKind::kWrite ? "write" : "read") +
                            " took " + std::to_string(op.t_e - op.t_b) + " ticks, expected " +
                            std::to_string(expect)});
    }
    if (op.kind == OpKind::kRead && op.no_quorum) {
      out.push_back({i, "read at " + std::to_string(op.t_b) + " found no quorum"});
    }
  }
  return out;
}

GammaReport measure_gamma(const std::vector<mob::CuredSpan>& spans, Tick end_of_run) {
  GammaReport rep;
  for (const auto& c : spans) {
    if (c.departed >= end_of_run) continue;
    if (c.resolved) {
      ++rep.resolved;
      rep.max_span = std::max(rep.max_span, c.end - c.departed);
    } else if (c.interrupted()) {
      // The cure lasted at least until the next infection.
      ++rep.interrupted;
      rep.max_span = std::max(rep.max_span, std::min(c.end, end_of_run) - c.departed);
    } else {
      ++rep.open;
      rep.max_span = std::max(rep.max_span, end_of_run - c.departed);
    }
  }
  return rep;
}

GammaReport measure_gamma(const mob::FailureTimeline& timeline, Tick end_of_run) {
  return measure_gamma(timeline.all_cured_spans(), end_of_run);
}

}  // namespace mbf::checker
