#include "mbf/messages.hpp"

namespace mbf {

namespace {
template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
}  // namespace

std::string kind_name(const Payload& payload) {
  return std::visit(Overloaded{
                        [](const WriteMsg&) { return std::string("WRITE"); },
                        [](const ReadMsg&) { return std::string("READ"); },
                        [](const ReplyMsg&) { return std::string("REPLY"); },
                        [](const ReadAckMsg&) { return std::string("READ_ACK"); },
                        [](const ReadFwMsg&) { return std::string("READ_FW"); },
                        [](const EchoMsg&) { return std::string("ECHO"); },
                        [](const EchoReqMsg&) { return std::string("ECHO_REQ"); },
                    },
                    payload);
}

std::optional<int> claimed_server(const Payload& payload) {
  if (const auto* m = std::get_if<ReplyMsg>(&payload)) return m->server;
  if (const auto* m = std::get_if<EchoMsg>(&payload)) return m->server;
  if (const auto* m = std::get_if<EchoReqMsg>(&payload)) return m->server;
  return std::nullopt;
}

}  // namespace mbf
