#pragma once

#include "mbf/types.hpp"

namespace mbf {

struct Thresholds {
  int k = 1;
  int n_min = 0;
  int reply_q = 0;
  int echo_q = 0;
};

// Both require delta <= Delta < 3*delta and f >= 1; otherwise ConfigError.
Thresholds thresholds_cam(Dur delta, Dur Delta, int f);
Thresholds thresholds_cum(Dur delta, Dur Delta, int f);
Thresholds thresholds_for(Model model, Dur delta, Dur Delta, int f);

}  // namespace mbf
