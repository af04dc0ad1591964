#include "cvbell/numerics/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace cvbell::numerics {
namespace {

constexpr double kInvSqrtPi = 0.56418958354775628695;  // 1/sqrt(pi)
constexpr double kTwoOverSqrtPi = 1.12837916709551257390;
constexpr int kWeidemanTerms = 64;
constexpr double kContinuedFractionRadius = 6.0;
constexpr double kTaylorRadius = 0.25;

// Coefficients of Weideman's rational expansion, computed once by a direct
// DFT of the sampled kernel.
struct WeidemanTable {
  double L;
  std::array<double, kWeidemanTerms> a;  // highest power first

  WeidemanTable() {
    const int N = kWeidemanTerms;
    const int M = 2 * N;
    const int M2 = 2 * M;
    L = std::sqrt(N / std::sqrt(2.0));
    // f has length M2: f[0] = 0 followed by samples at k = -M+1 .. M-1.
    std::array<double, 4 * kWeidemanTerms> f{};
    for (int k = -M + 1; k <= M - 1; ++k) {
      const double theta = k * std::numbers::pi / M;
      const double t = L * std::tan(theta / 2.0);
      f[k + M] = std::exp(-t * t) * (L * L + t * t);
    }
    f[0] = 0.0;
    // fftshift of a length-M2 vector, then real part of the DFT divided by M2.
    std::array<double, 4 * kWeidemanTerms> shifted{};
    for (int i = 0; i < M2; ++i) shifted[i] = f[(i + M2 / 2) % M2];
    std::array<double, kWeidemanTerms + 1> dft{};
    for (int j = 0; j <= N; ++j) {
      double acc = 0.0;
      for (int i = 0; i < M2; ++i) {
        acc += shifted[i] * std::cos(2.0 * std::numbers::pi * i * j / M2);
      }
      dft[j] = acc / M2;
    }
    for (int j = 0; j < N; ++j) a[j] = dft[N - j];
  }
};

const WeidemanTable& weideman() {
  static const WeidemanTable table;
  return table;
}

Complex w_taylor(Complex z) {
  // w(z) = sum_n (iz)^n / Gamma(n/2 + 1)
  const Complex iz{-z.imag(), z.real()};
  Complex term = 1.0;
  Complex sum = 0.0;
  for (int n = 0; n < 40; ++n) {
    sum += term / std::tgamma(n / 2.0 + 1.0);
    term *= iz;
    if (std::abs(term) < 1e-18) break;
  }
  return sum;
}

Complex w_weideman(Complex z) {
  const auto& tab = weideman();
  const Complex iz{-z.imag(), z.real()};
  const Complex denom = tab.L - iz;
  const Complex Z = (tab.L + iz) / denom;
  Complex p = 0.0;
  for (double c : tab.a) p = p * Z + c;
  return 2.0 * p / (denom * denom) + kInvSqrtPi / denom;
}

Complex w_continued_fraction(Complex z) {
  // w(z) = (i/sqrt(pi)) / (z - (1/2)/(z - 1/(z - (3/2)/(z - ...))))
  const double r = std::abs(z);
  const int depth = r > 20.0 ? 40 : (r > 10.0 ? 80 : 160);
  Complex f = z;
  for (int k = depth; k >= 1; --k) f = z - (0.5 * k) / f;
  return Complex{0.0, kInvSqrtPi} / f;
}

Complex w_upper(Complex z) {
  const double r = std::abs(z);
  if (r < kTaylorRadius) return w_taylor(z);
  if (r < kContinuedFractionRadius) return w_weideman(z);
  return w_continued_fraction(z);
}

Complex erf_taylor(Complex z) {
  const Complex z2 = z * z;
  Complex term = z;
  Complex sum = z;
  for (int n = 1; n < 60; ++n) {
    term *= -z2 / static_cast<double>(n);
    const Complex add = term / static_cast<double>(2 * n + 1);
    sum += add;
    if (std::abs(add) < 1e-17 * std::abs(sum)) break;
  }
  return kTwoOverSqrtPi * sum;
}

double erfi_taylor(double x) {
  const double x2 = x * x;
  double term = x;
  double sum = x;
  for (int n = 1; n < 60; ++n) {
    term *= x2 / n;
    const double add = term / (2 * n + 1);
    sum += add;
    if (std::abs(add) < 1e-17 * std::abs(sum)) break;
  }
  return kTwoOverSqrtPi * sum;
}

}  // namespace

Complex faddeeva(Complex z) {
  if (z.imag() >= 0.0) return w_upper(z);
  return 2.0 * std::exp(-z * z) - w_upper(-z);
}

double erfi(double x) {
  if (std::abs(x) < 1.0) return erfi_taylor(x);
  // erfi(x) = exp(x^2) Im w(x) for real x.
  return std::exp(x * x) * w_upper(Complex{x, 0.0}).imag();
}

Complex erf(Complex z) {
  if (z.real() < 0.0) return -erf(-z);
  if (z.real() == 0.0) return Complex{0.0, erfi(z.imag())};
  if (z.imag() == 0.0) return std::erf(z.real());
  if (std::abs(z) < 1.0) return erf_taylor(z);
  // Re z > 0 puts iz in the upper half-plane.
  const Complex iz{-z.imag(), z.real()};
  return 1.0 - std::exp(-z * z) * w_upper(iz);
}

ScaledErf erf_scaled(Complex z) {
  if (z.real() < 0.0) {
    ScaledErf r = erf_scaled(-z);
    r.mantissa = -r.mantissa;
    return r;
  }
  const Complex z2 = z * z;
  if (z2.real() > -30.0) return {Complex{}, erf(z)};
  const Complex iz{-z.imag(), z.real()};
  return {-z2, std::exp(z2) - faddeeva(iz)};
}

Complex erfi(Complex z) {
  if (z.imag() == 0.0) return erfi(z.real());
  const Complex e = erf(Complex{-z.imag(), z.real()});
  return Complex{e.imag(), -e.real()};
}

}  // namespace cvbell::numerics
