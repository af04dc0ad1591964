#include "cvbell/types.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cvbell {

void EtsParams::validate() const {
  if (!std::isfinite(V) || V < 1.0) throw std::invalid_argument("V must be finite and >= 1, got " + std::to_string(V));
  if (!std::isfinite(d) || d <= 0.0) throw std::invalid_argument("d must be finite and > 0, got " + std::to_string(d));
  if (!std::isfinite(eta) || eta <= 0.0 || eta > 1.0) {
    throw std::invalid_argument("eta must lie in (0, 1], got " + std::to_string(eta));
  }
}

LeggettSetting LeggettSetting::canonical() const {
  constexpr double pi = std::numbers::pi;
  double t = std::remainder(theta, 2.0 * pi);  // (-pi, pi]
  double p = phi;
  if (t < 0.0) {
    t = -t;
    p += pi;
  }
  p = std::remainder(p, 2.0 * pi);
  return {t, p};
}

}  // namespace cvbell
