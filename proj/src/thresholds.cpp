#include "mbf/thresholds.hpp"

#include <string>

namespace mbf {

namespace {
int regime_k(Dur delta, Dur Delta, int f) {
  if (f < 1) throw ConfigError("f must be at least 1");
  if (delta < 1) throw ConfigError("delta must be at least 1");
  if (Delta < delta || Delta >= 3 * delta) {
    throw ConfigError("unsupported regime: Delta = " + std::to_string(Delta) +
                      " outside [delta, 3*delta) for delta = " + std::to_string(delta));
  }
  return static_cast<int>((2 * delta + Delta - 1) / Delta);
}
}  // namespace

Thresholds thresholds_cam(Dur delta, Dur Delta, int f) {
  Thresholds t;
  t.k = regime_k(delta, Delta, f);
  t.n_min = (t.k == 1 ? 4 : 6) * f + 1;
  t.reply_q = (t.k == 1 ? 2 : 3) * f + 1;
  t.echo_q = (t.k + 1) * f;
  return t;
}

Thresholds thresholds_cum(Dur delta, Dur Delta, int f) {
  Thresholds t;
  t.k = regime_k(delta, Delta, f);
  t.n_min = (5 * t.k + 2) * f + 1;
  t.reply_q = (3 * t.k + 1) * f + 1;
  t.echo_q = 3 * t.k * f + 1;
  return t;
}

Thresholds thresholds_for(Model model, Dur delta, Dur Delta, int f) {
  return model == Model::kCam ? thresholds_cam(delta, Delta, f) : thresholds_cum(delta, Delta, f);
}

}  // namespace mbf
