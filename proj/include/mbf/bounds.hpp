#pragma once

#include <cstdint>
#include <utility>

#include "mbf/types.hpp"

namespace mbf::bounds {

struct BoundsInput {
  Dur delta = 1;   // message delay bound
  Dur Delta = 1;   // minimum agent dwell
  Dur gamma = 0;   // curing time
  Dur tr = 2;      // read duration
  int f = 1;
  Model model = Model::kCam;
};

// Throws ConfigError unless delta, Delta, tr >= 1, gamma >= 0, f >= 0 and
// tr >= 2*delta.
void check(const BoundsInput& in);

std::int64_t ramp(std::int64_t x);
// Exact ceiling of a/b for b > 0, any sign of a.
std::int64_t ceil_div(std::int64_t a, std::int64_t b);
std::int64_t floor_div(std::int64_t a, std::int64_t b);
// lim eps->0+ of ceil((y + eps) / D).
std::int64_t ceil_plus(std::int64_t y, std::int64_t D);
// lim eps->0+ of ceil((y - eps) / D). Not ramped.
std::int64_t ceil_minus(std::int64_t y, std::int64_t D);

// Per-agent quantities, before scaling by f.
std::int64_t max_b1(Dur tr, Dur Delta);
std::int64_t max_cu(const BoundsInput& in);
std::int64_t max_sil(const BoundsInput& in);
std::int64_t min_cbc(const BoundsInput& in);

std::int64_t max_b(Dur tr, Dur Delta, int f);

// Largest n for which no register emulation exists; protocols need n_lb + 1.
std::int64_t n_lb(const BoundsInput& in);

struct ReplyCounts {
  std::int64_t max_incorrect = 0;
  std::int64_t min_correct = 0;
  bool operator==(const ReplyCounts&) const = default;
};

ReplyCounts reply_counts(const BoundsInput& in, std::int64_t n);

struct BoundsOutput {
  std::int64_t max_b = 0, max_cu = 0, max_sil = 0, min_cbc = 0;  // per agent
  std::int64_t n_lb = 0;
};

BoundsOutput evaluate(const BoundsInput& in);

}  // namespace mbf::bounds
