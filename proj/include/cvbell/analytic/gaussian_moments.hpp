#pragma once

#include "cvbell/types.hpp"

namespace cvbell::analytic {

/// Moments of a real Gaussian X ~ N(mean, var) against exponentials of
/// quadratic polynomials, continued analytically to complex coefficients.
///
///   E[exp(a X^2 + b X)]                 = tilt.scale
///   E[exp(a X^2 + b X) erf(k X + k0)]   = tilt.scale * erf((k m' + k0) / sqrt(1 + 2 k^2 v'))
///
/// with m' = (mean + b var) / (1 - 2 a var) and v' = var / (1 - 2 a var).
/// Requires 1 - 2 a var > 0 and Re(1 + 2 k^2 v') > 0; var = 0 is allowed.
struct GaussianTilt {
  Complex log_scale;  // log E[exp(a X^2 + b X)]
  Complex mean;       // m'
  double variance;    // v'

  Complex scale() const { return std::exp(log_scale); }
};

GaussianTilt gaussian_tilt(double a, Complex b, double mean, double var);

Complex expect_erf(const GaussianTilt& tilt, Complex k, Complex k0);

/// Same moment, multiplied by exp(extra_log) before exponentiation.
Complex expect_erf(const GaussianTilt& tilt, Complex k, Complex k0, Complex extra_log);

}  // namespace cvbell::analytic
