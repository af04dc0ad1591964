#include "cvbell/analytic/gaussian_moments.hpp"

#include <cmath>
#include <stdexcept>

#include "cvbell/numerics/special.hpp"

namespace cvbell::analytic {

GaussianTilt gaussian_tilt(double a, Complex b, double mean, double var) {
  const double t = 1.0 - 2.0 * a * var;
  if (!(t > 0.0)) throw std::domain_error("gaussian_tilt: divergent Gaussian integral");
  const Complex expo = (a * mean * mean + b * mean + 0.5 * b * b * var) / t;
  return {expo - 0.5 * std::log(t), (mean + b * var) / t, var / t};
}

Complex expect_erf(const GaussianTilt& tilt, Complex k, Complex k0, Complex extra_log) {
  const Complex spread = 1.0 + 2.0 * k * k * tilt.variance;
  if (!(spread.real() > 0.0)) throw std::domain_error("expect_erf: divergent erf moment");
  const numerics::ScaledErf e = numerics::erf_scaled((k * tilt.mean + k0) / std::sqrt(spread));
  return std::exp(tilt.log_scale + extra_log + e.log_scale) * e.mantissa;
}

Complex expect_erf(const GaussianTilt& tilt, Complex k, Complex k0) { return expect_erf(tilt, k, k0, 0.0); }

}  // namespace cvbell::analytic
