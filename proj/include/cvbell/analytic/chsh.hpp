#pragma once

#include <array>
#include <stdexcept>

#include "cvbell/types.hpp"

namespace cvbell::analytic {

/// Raised when the closed form produces a non-physical correlation.
class FormulaInconsistency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Single-mode kernel K_{s s'}(theta) = int d^2a P(a) <s' a| V^+ S_eta V |s a>
/// for the four sign pairs, ordered (++, +-, -+, --).
std::array<Complex, 4> mode_kernel(double theta, const EtsParams& params);

/// Ensemble trace 1 + exp(-4 d^2 / V) / V^2 of the heralded thermal branch.
double ensemble_norm(const EtsParams& params);

/// Closed-form sign-binned correlation C(theta_a, theta_b) of the heralded
/// entangled thermal state behind lossy homodyne detectors.
///
/// The thermal average is done exactly: every term is a Gaussian moment of
/// erf (diagonal coherences, Erf of x) or of erfi (cross coherences, which
/// contribute through Im(alpha)). Throws FormulaInconsistency if the
/// imaginary residue exceeds 1e-6 or |C| > 1 + 1e-6.
double closed_form_correlation(double theta_a, double theta_b, const EtsParams& params);

/// C(a, b) + C(a', b) + C(a, b') - C(a', b').
double bell_b(const ChshAngles& angles, const EtsParams& params);

}  // namespace cvbell::analytic
