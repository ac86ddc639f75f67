#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace mbf {

// Simulated time. All protocol durations (delta, Delta, gamma, read length)
// are integer tick counts.
using Tick = std::int64_t;
using Dur = std::int64_t;

using Value = std::int64_t;
using SeqNo = std::int64_t;

enum class Model { kCam, kCum };

std::string to_string(Model model);
Model parse_model(const std::string& text);

enum class ProcessKind : std::uint8_t { kServer, kClient };

struct ProcessId {
  ProcessKind kind = ProcessKind::kServer;
  int index = 0;

  static constexpr ProcessId server(int i) { return {ProcessKind::kServer, i}; }
  static constexpr ProcessId client(int i) { return {ProcessKind::kClient, i}; }

  bool is_server() const { return kind == ProcessKind::kServer; }
  bool is_client() const { return kind == ProcessKind::kClient; }

  auto operator<=>(const ProcessId&) const = default;
};

std::string to_string(ProcessId id);

// A <value, sequence-number> pair.
struct ValueEntry {
  Value value = 0;
  SeqNo sn = 0;

  auto operator<=>(const ValueEntry&) const = default;
};

std::string to_string(const ValueEntry& entry);

// The register's initial content, pre-loaded into every server.
inline constexpr ValueEntry kInitialEntry{0, 0};

// Thrown for parameter combinations outside the supported regime or
// otherwise invalid configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace mbf

template <>
struct std::hash<mbf::ValueEntry> {
  std::size_t operator()(const mbf::ValueEntry& e) const noexcept {
    return std::hash<std::int64_t>{}(e.value) * 1000003u ^
           std::hash<std::int64_t>{}(e.sn);
  }
};
