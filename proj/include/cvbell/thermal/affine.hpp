#pragma once

#include <array>
#include <vector>

#include "cvbell/types.hpp"

namespace cvbell::thermal {

/// amp * exp(lin * z + lin_conj * conj(z)) |scale_A z + shift_A, scale_B z + shift_B>
///
/// A two-mode coherent ket whose labels are affine in one thermal variable z.
/// Settings act on it exactly, so the P-average can be taken term by term.
struct AffineKet {
  Complex amp{1.0, 0.0};
  Complex lin{};
  Complex lin_conj{};
  std::array<double, 2> scale{};
  std::array<Complex, 2> shift{};
};

using AffineState = std::vector<AffineKet>;

AffineState affine_displace(const AffineState& s, Mode mode, Complex zeta);
AffineState affine_kerr(const AffineState& s, Mode mode);
AffineState affine_beamsplit(const AffineState& s, double transmission_amplitude);
AffineState affine_bell_setting(const AffineState& s, double theta, Mode mode, double d);
AffineState affine_leggett_setting(const AffineState& s, const LeggettSetting& setting, Mode mode, double d);
AffineState affine_setting(const AffineState& s, const LocalSetting& setting, Mode mode, double d);

enum class Observable { Identity, SignA, SignB, SignAB };

/// Distribution of z: Re z ~ N(mean, var), Im z ~ N(0, var).
struct ThermalVariable {
  double mean = 0.0;
  double var = 0.0;
};

/// E_z <bra(z)| O_eta |ket(z)>, summed over all term pairs.
///
/// Overlaps are Gaussian in z and a lossy sign element contributes one erf per
/// mode. Zero or one erf per axis integrates in closed form; two erfs on the
/// same axis fall back to composite Gauss-Legendre on that axis.
Complex affine_expectation(const AffineState& bra, const AffineState& ket, Observable obs, double eta,
                           const ThermalVariable& z);

/// E[exp(a t^2 + b t) erf(k1 t + c1) erf(k2 t + c2)], t ~ N(mean, var).
Complex expect_exp_erf2(double a, Complex b, double mean, double var, Complex k1, Complex c1, Complex k2,
                        Complex c2);

}  // namespace cvbell::thermal
