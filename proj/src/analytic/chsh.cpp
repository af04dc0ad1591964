#include "cvbell/analytic/chsh.hpp"

#include <cmath>

#include "cvbell/analytic/gaussian_moments.hpp"

namespace cvbell::analytic {
namespace {

const Complex kI{0.0, 1.0};

// U_NL D(i delta) U_NL |g> = sum_i amp_i exp(i sigma_i delta Re g) |tau_i g + i eps_i delta>
struct Branch {
  Complex amp;
  double sigma;
  double tau;
  double eps;
};

constexpr double kHalf = 0.5;
const std::array<Branch, 4> kBellExpansion{{
    {Complex{0.0, -kHalf}, +1.0, +1.0, +1.0},
    {Complex{kHalf, 0.0}, +1.0, -1.0, -1.0},
    {Complex{kHalf, 0.0}, -1.0, -1.0, +1.0},
    {Complex{0.0, kHalf}, -1.0, +1.0, -1.0},
}};

// int d^2a P(a) <s' a| V^+ S_eta V |s a>
Complex kernel_element(double s, double sp, double delta, const EtsParams& prm) {
  const double var = 0.25 * (prm.V - 1.0);
  const double root = std::sqrt(0.5 * prm.eta);
  Complex total = 0.0;
  for (const Branch& ki : kBellExpansion) {
    for (const Branch& bj : kBellExpansion) {
      const double p = ki.tau * s;
      const double pp = bj.tau * sp;
      const Complex u = kI * (ki.eps * delta);
      const Complex v = kI * (bj.eps * delta);
      // <b|k> with k = p a + u, b = pp a + v, split into x = Re a, y = Im a.
      const double quad = -0.5 * (p - pp) * (p - pp);
      const Complex lam = pp * u - 0.5 * (p * u + pp * v);
      const Complex mu = p * std::conj(v) - 0.5 * (p * std::conj(u) + pp * std::conj(v));
      const Complex c0 = std::conj(v) * u - 0.5 * (std::norm(u) + std::norm(v));
      const Complex bx = lam + mu + kI * (delta * (ki.sigma * s - bj.sigma * sp));
      const Complex by = kI * (mu - lam);
      const GaussianTilt tx = gaussian_tilt(quad, bx, prm.d, var);
      const GaussianTilt ty = gaussian_tilt(quad, by, 0.0, var);
      const Complex k0 = root * (u + std::conj(v));
      const Complex value = p == pp ? expect_erf(tx, root * 2.0 * p, k0, c0 + ty.log_scale)
                                    : expect_erf(ty, root * 2.0 * p * kI, k0, c0 + tx.log_scale);
      total += ki.amp * std::conj(bj.amp) * value;
    }
  }
  return total;
}

}  // namespace

std::array<Complex, 4> mode_kernel(double theta, const EtsParams& params) {
  params.validate();
  const double delta = theta / (2.0 * params.d);
  return {kernel_element(1, 1, delta, params), kernel_element(1, -1, delta, params),
          kernel_element(-1, 1, delta, params), kernel_element(-1, -1, delta, params)};
}

double ensemble_norm(const EtsParams& params) {
  return 1.0 + std::exp(-4.0 * params.d * params.d / params.V) / (params.V * params.V);
}

double closed_form_correlation(double theta_a, double theta_b, const EtsParams& params) {
  const auto ka = mode_kernel(theta_a, params);
  const auto kb = mode_kernel(theta_b, params);
  Complex num = 0.0;
  for (int i = 0; i < 4; ++i) num += 0.5 * ka[i] * kb[i];
  const Complex c = num / ensemble_norm(params);
  if (std::abs(c.imag()) > 1e-6 || std::abs(c.real()) > 1.0 + 1e-6 || !std::isfinite(c.real())) {
    throw FormulaInconsistency("closed-form correlation left the physical range");
  }
  return c.real();
}

double bell_b(const ChshAngles& a, const EtsParams& params) {
  const auto k1 = mode_kernel(a.theta_a, params);
  const auto k2 = mode_kernel(a.theta_a2, params);
  const auto m1 = mode_kernel(a.theta_b, params);
  const auto m2 = mode_kernel(a.theta_b2, params);
  const double norm = ensemble_norm(params);
  auto corr = [&](const std::array<Complex, 4>& x, const std::array<Complex, 4>& y) {
    Complex num = 0.0;
    for (int i = 0; i < 4; ++i) num += 0.5 * x[i] * y[i];
    const Complex c = num / norm;
    if (std::abs(c.imag()) > 1e-6 || std::abs(c.real()) > 1.0 + 1e-6 || !std::isfinite(c.real())) {
      throw FormulaInconsistency("closed-form correlation left the physical range");
    }
    return c.real();
  };
  return corr(k1, m1) + corr(k2, m1) + corr(k1, m2) - corr(k2, m2);
}

}  // namespace cvbell::analytic
