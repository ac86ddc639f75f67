#include "mbf/bounds.hpp"

#include <algorithm>
#include <string>

namespace mbf::bounds {

void check(const BoundsInput& in) {
  if (in.delta < 1 || in.Delta < 1 || in.tr < 1) {
    throw ConfigError("delta, Delta and T_r must be at least 1 tick");
  }
  if (in.gamma < 0) throw ConfigError("gamma must be non-negative");
  if (in.f < 0) throw ConfigError("f must be non-negative");
  if (in.tr < 2 * in.delta) {
    throw ConfigError("T_r = " + std::to_string(in.tr) + " is below 2*delta");
  }
}

std::int64_t ramp(std::int64_t x) { return std::max<std::int64_t>(x, 0); }

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

std::int64_t ceil_plus(std::int64_t y, std::int64_t D) { return floor_div(y, D) + 1; }

std::int64_t ceil_minus(std::int64_t y, std::int64_t D) { return floor_div(y - 1, D) + 1; }

std::int64_t max_b1(Dur tr, Dur Delta) { return ceil_div(tr, Delta) + 1; }

std::int64_t max_b(Dur tr, Dur Delta, int f) { return max_b1(tr, Delta) * f; }

std::int64_t max_cu(const BoundsInput& in) {
  if (in.model == Model::kCam) return ramp(ceil_plus(in.gamma - in.Delta, in.Delta));
  std::int64_t steps = ceil_div(in.tr, in.Delta);
  return ramp(ceil_minus(in.tr - steps * in.Delta + in.gamma, in.Delta));
}

std::int64_t max_sil(const BoundsInput& in) {
  if (in.model == Model::kCam) {
    return ramp(ceil_plus(in.gamma - in.Delta - in.tr + in.delta, in.Delta));
  }
  std::int64_t steps = ceil_div(in.tr, in.Delta);
  return ramp(ceil_minus(in.gamma + in.delta - steps * in.Delta, in.Delta));
}

namespace {
std::int64_t cbc_cam_form(const BoundsInput& in) {
  return ramp(ceil_div(in.tr, in.Delta) - ceil_div(in.delta, in.Delta)) +
         ramp(ceil_div(in.tr - in.gamma - in.delta, in.Delta));
}
}  // namespace

std::int64_t min_cbc(const BoundsInput& in) {
  if (in.model == Model::kCam) return cbc_cam_form(in);
  std::int64_t cu = max_cu(in);
  if (cu <= 0) return cbc_cam_form(in);
  return ceil_minus(in.tr - in.delta, in.Delta) +
         ramp(ceil_div(in.tr, in.Delta) - ceil_div(in.gamma + in.delta, in.Delta)) +
         (cu - max_sil(in));
}

std::int64_t n_lb(const BoundsInput& in) {
  check(in);
  std::int64_t b = max_b1(in.tr, in.Delta);
  if (in.model == Model::kCam) return (2 * b + max_sil(in) - min_cbc(in)) * in.f;
  return (2 * (b + max_cu(in)) - min_cbc(in)) * in.f;
}

ReplyCounts reply_counts(const BoundsInput& in, std::int64_t n) {
  check(in);
  std::int64_t b = max_b1(in.tr, in.Delta) * in.f;
  std::int64_t cbc = min_cbc(in) * in.f;
  if (in.model == Model::kCam) {
    std::int64_t sil = max_sil(in) * in.f;
    return {b, n - (b + sil) + cbc};
  }
  std::int64_t cu = max_cu(in) * in.f;
  return {b + cu, n - (b + cu) + cbc};
}

BoundsOutput evaluate(const BoundsInput& in) {
  BoundsOutput out;
  out.max_b = max_b1(in.tr, in.Delta);
  out.max_cu = max_cu(in);
  out.max_sil = max_sil(in);
  out.min_cbc = min_cbc(in);
  out.n_lb = n_lb(in);
  return out;
}

}  // namespace mbf::bounds
