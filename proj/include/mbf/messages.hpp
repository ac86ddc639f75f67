#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mbf/types.hpp"

namespace mbf {

using Nonce = std::uint64_t;

struct WriteMsg {
  Value value = 0;
  SeqNo csn = 0;
};

struct ReadMsg {
  int client = 0;
};

struct ReplyMsg {
  int server = 0;
  std::vector<ValueEntry> entries;
};

struct ReadAckMsg {
  int client = 0;
};

struct ReadFwMsg {
  int client = 0;
};

// `bottom` marks the awareAll notification of a server that just learned it
// was cured. `nonce` is only used under CUM.
struct EchoMsg {
  int server = 0;
  std::vector<ValueEntry> entries;
  bool bottom = false;
  std::vector<int> pending_reads;
  std::optional<Nonce> nonce;
};

struct EchoReqMsg {
  int server = 0;
  std::optional<Nonce> nonce;
};

using Payload = std::variant<WriteMsg, ReadMsg, ReplyMsg, ReadAckMsg, ReadFwMsg,
                             EchoMsg, EchoReqMsg>;

std::string kind_name(const Payload& payload);

// Server id a payload claims as its origin, if the message type carries one.
std::optional<int> claimed_server(const Payload& payload);

}  // namespace mbf
