#pragma once

#include <complex>

namespace cvbell {

using Complex = std::complex<double>;

namespace numerics {

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz).
///
/// Upper half-plane values come from a Taylor series near the origin, a
/// 64-term Weideman rational expansion for |z| < 6 and the Laplace continued
/// fraction beyond. The lower half-plane uses w(z) = 2 exp(-z^2) - w(-z),
/// which overflows once Im(z)^2 - Re(z)^2 exceeds ~709.
Complex faddeeva(Complex z);

/// Complex error function. Odd, exact zero at the origin.
Complex erf(Complex z);

/// erf(z) = exp(log_scale) * mantissa, split so that the huge values off the
/// real axis (|Im z| > |Re z|) can be combined with small Gaussian prefactors
/// before exponentiating.
struct ScaledErf {
  Complex log_scale;
  Complex mantissa;

  Complex value() const { return std::exp(log_scale) * mantissa; }
};

ScaledErf erf_scaled(Complex z);

/// Imaginary error function erfi(z) = -i erf(iz). Real on the real axis.
Complex erfi(Complex z);

/// Real erfi, needed by several closed forms.
double erfi(double x);

}  // namespace numerics
}  // namespace cvbell
