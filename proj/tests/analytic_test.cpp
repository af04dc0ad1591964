#include <cmath>
#include <numbers>
#include <random>

#include "cvbell/analytic/chsh.hpp"
#include "cvbell/fock/oracle.hpp"
#include "cvbell/inequalities/inequalities.hpp"
#include "cvbell/thermal/ensemble.hpp"
#include "doctest.h"

using namespace cvbell;
using analytic::closed_form_correlation;

namespace {

constexpr double kPi = std::numbers::pi;

// Thermal average done the slow way: Gauss-Hermite over both branch labels,
// each branch evaluated in the number basis.
double fock_thermal_correlation(double ta, double tb, const EtsParams& p, int order, int dim) {
  const auto grid = thermal::pfunc_grid(p.V, p.d, order);
  Complex num{}, den{};
  for (const auto& a : grid.samples) {
    for (const auto& b : grid.samples) {
      fock::OracleScenario s;
      s.alpha = a.alpha;
      s.beta = b.alpha;
      s.d = p.d;
      s.eta = p.eta;
      s.dim = dim;
      s.setting_a = LocalSetting::bell(ta);
      s.setting_b = LocalSetting::bell(tb);
      const auto m = fock::oracle_sign_moments(s);
      num += a.weight * b.weight * m[3];
      den += a.weight * b.weight * m[0];
    }
  }
  return (num / den).real();
}

}  // namespace

TEST_CASE("pure state point agrees with the number-basis oracle") {
  const EtsParams p{1.0, 1.0, 1.0};
  fock::OracleScenario s;
  s.setting_a = LocalSetting::bell(0.3);
  s.setting_b = LocalSetting::bell(-0.3);
  CHECK(std::abs(closed_form_correlation(0.3, -0.3, p) - fock::oracle_correlation(s)) < 1e-6);
}

TEST_CASE("pure state with loss agrees with the oracle on a grid") {
  for (double eta : {0.05, 0.5, 1.0}) {
    for (double ta : {-1.2, 0.0, 0.7}) {
      for (double tb : {-0.4, 0.9}) {
        const EtsParams p{1.0, 1.3, eta};
        fock::OracleScenario s;
        s.alpha = s.beta = p.d;
        s.d = p.d;
        s.eta = eta;
        s.setting_a = LocalSetting::bell(ta);
        s.setting_b = LocalSetting::bell(tb);
        CHECK(std::abs(closed_form_correlation(ta, tb, p) - fock::oracle_correlation(s)) < 1e-8);
      }
    }
  }
}

TEST_CASE("thermal point agrees with a Gauss-Hermite average of oracle branches") {
  const EtsParams p{1.1, 0.8, 0.6};
  for (auto [ta, tb] : {std::pair{0.3, -0.3}}) {
    const double ref = fock_thermal_correlation(ta, tb, p, 5, 30);
    CHECK(std::abs(closed_form_correlation(ta, tb, p) - ref) < 1e-6);
  }
}

TEST_CASE("correlation is symmetric under exchange of the parties") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> th(-kPi, kPi), lv(0.0, 3.0), ld(-1.0, 2.5), ue(0.05, 1.0);
  for (int i = 0; i < 40; ++i) {
    const EtsParams p{std::pow(10.0, lv(rng)), std::pow(10.0, ld(rng)), ue(rng)};
    const double a = th(rng), b = th(rng);
    CHECK(closed_form_correlation(a, b, p) == doctest::Approx(closed_form_correlation(b, a, p)).epsilon(1e-12));
  }
}

TEST_CASE("correlation stays within [-1, 1]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> th(-kPi, kPi), lv(0.0, 3.0), ld(-1.0, 2.6), ue(0.01, 1.0);
  for (int i = 0; i < 300; ++i) {
    const EtsParams p{std::pow(10.0, lv(rng)), std::pow(10.0, ld(rng)), ue(rng)};
    CHECK(std::abs(closed_form_correlation(th(rng), th(rng), p)) <= 1.0 + 1e-9);
  }
}

TEST_CASE("equal angles give B = 2 C") {
  const EtsParams p{10.0, 2.0, 0.5};
  const double t = 0.37;
  CHECK(analytic::bell_b({t, t, t, t}, p) == doctest::Approx(2.0 * closed_form_correlation(t, t, p)).epsilon(1e-13));
}

TEST_CASE("closed form matches the moment-scheme ensemble") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> th(-kPi / 2, kPi / 2), uv(1.0, 50.0), ud(0.2, 5.0), ue(0.05, 1.0);
  for (int i = 0; i < 20; ++i) {
    const EtsParams p{uv(rng), ud(rng), ue(rng)};
    const double a = th(rng), b = th(rng);
    const auto ens = thermal::ensemble_correlation(Family::QubitEts, LocalSetting::bell(a), LocalSetting::bell(b), p);
    CHECK(std::abs(closed_form_correlation(a, b, p) - ens.value) < 1e-9);
  }
}

TEST_CASE("closed form matches the quadrature ensemble at small V") {
  thermal::EnsembleOptions o;
  o.scheme = thermal::Scheme::Quadrature;
  o.order = 16;
  for (double V : {1.5, 2.5, 4.0}) {
    const EtsParams p{V, 1.4, 0.7};
    const auto ens = thermal::ensemble_correlation(Family::QubitEts, LocalSetting::bell(0.4), LocalSetting::bell(-0.2),
                                                   p, o);
    CHECK(std::abs(closed_form_correlation(0.4, -0.2, p) - ens.value) < 1e-4);
  }
}

TEST_CASE("theta = 0 is approached continuously from both sides") {
  const EtsParams p{3.0, 1.7, 0.8};
  const double c0 = closed_form_correlation(0.0, 0.5, p);
  for (double eps : {1e-6, 1e-9}) {
    CHECK(std::abs(closed_form_correlation(eps, 0.5, p) - c0) < 1e-5);
    CHECK(std::abs(closed_form_correlation(-eps, 0.5, p) - c0) < 1e-5);
  }
}

TEST_CASE("ensemble normalisation") {
  for (auto [V, d] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}, std::pair{1000.0, 3.0}}) {
    const EtsParams p{V, d, 1.0};
    const double want = 1.0 + std::exp(-4.0 * d * d / V) / (V * V);
    CHECK(analytic::ensemble_norm(p) == doctest::Approx(want).epsilon(1e-14));
    CHECK(thermal::ensemble_trace(Family::QubitEts, p) == doctest::Approx(want).epsilon(1e-12));
  }
  CHECK(analytic::ensemble_norm({1.0, 1.0, 1.0}) == doctest::Approx(1.0 + std::exp(-4.0)).epsilon(1e-14));
}

TEST_CASE("large separation approaches the Tsirelson value") {
  const EtsParams p{1.0, 30.0, 1.0};
  const double x = kPi / 16;
  const double b = analytic::bell_b({x, -x, -3 * x, 3 * x}, p);
  CHECK(std::abs(std::abs(b) - 2.0 * std::sqrt(2.0)) < 1e-2);
  CHECK(std::abs(b) <= 2.0 * std::sqrt(2.0) + 1e-9);
}

TEST_CASE("vanishing separation gives no violation") {
  const EtsParams p{1.0, 0.02, 1.0};
  const auto best = inequalities::chsh_max(p, inequalities::Backend::analytic(), inequalities::default_chsh_config());
  CHECK(best.b_max <= 2.0 + 1e-9);
}

TEST_CASE("mode kernels reduce to overlaps at theta = 0 without loss") {
  // The theta = 0 setting maps |s d> to |-s d> up to phase, and
  // <d|S|d> = erf(sqrt 2 d).
  const EtsParams p{1.0, 0.9, 1.0};
  const auto k = analytic::mode_kernel(0.0, p);
  CHECK(std::abs(k[0] + Complex(std::erf(std::sqrt(2.0) * p.d))) < 1e-12);
  CHECK(std::abs(k[3] - Complex(std::erf(std::sqrt(2.0) * p.d))) < 1e-12);
}
