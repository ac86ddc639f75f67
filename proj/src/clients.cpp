#include "mbf/clients.hpp"

namespace mbf::clients {

Writer::Writer(int id, sim::Network& net, Dur delta, checker::History* history)
    : id_(id), net_(net), delta_(delta), history_(history) {}

void Writer::write(Value v) {
  if (in_flight_) throw SwmrViolation("write invoked while another write is in flight");
  ++csn_;
  checker::OpRecord op;
  op.kind = checker::OpKind::kWrite;
  op.client = id_;
  op.t_b = net_.engine().now();
  op.value = v;
  op.sn = csn_;
  in_flight_ = op;
  net_.broadcast(ProcessId::client(id_), WriteMsg{v, csn_});
  net_.engine().schedule_after(delta_, [this] {
    in_flight_->t_e = net_.engine().now();
    in_flight_->complete = true;
    if (history_) history_->add(*in_flight_);
    in_flight_.reset();
  });
}

Reader::Reader(int id, sim::Network& net, Dur delta, int reply_q, checker::History* history)
    : id_(id), net_(net), delta_(delta), reply_q_(reply_q), history_(history) {}

void Reader::read() {
  if (in_flight_) throw std::logic_error("reader " + std::to_string(id_) + " is already reading");
  replies_.clear();
  checker::OpRecord op;
  op.kind = checker::OpKind::kRead;
  op.client = id_;
  op.t_b = net_.engine().now();
  in_flight_ = op;
  net_.broadcast(ProcessId::client(id_), ReadMsg{id_});
  net_.engine().schedule_after(2 * delta_, [this] { finish(); });
}

void Reader::on_reply(const sim::Envelope& env) {
  if (!in_flight_) return;
  const auto* m = std::get_if<ReplyMsg>(&env.payload);
  if (!m) return;
  replies_.add_all(env.sender.index, m->entries);
  if (on_reply_) on_reply_(env);
}

void Reader::finish() {
  auto picked = select_value(replies_, static_cast<std::size_t>(reply_q_));
  net_.broadcast(ProcessId::client(id_), ReadAckMsg{id_});
  auto& op = *in_flight_;
  op.t_e = net_.engine().now();
  op.complete = true;
  if (picked) {
    op.value = picked->value;
    op.sn = picked->sn;
  } else {
    op.no_quorum = true;
  }
  if (history_) history_->add(op);
  if (on_done_) on_done_(op, replies_);
  in_flight_.reset();
}

}  // namespace mbf::clients
