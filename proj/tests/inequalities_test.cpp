#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "cvbell/inequalities/inequalities.hpp"
#include "cvbell/thermal/ensemble.hpp"
#include "doctest.h"

using namespace cvbell;
using namespace cvbell::inequalities;

namespace {

constexpr double kPi = std::numbers::pi;
const double kTsirelson = 2.0 * std::sqrt(2.0);

std::array<double, 3> unit(const LeggettSetting& s) {
  return {std::sin(s.theta) * std::cos(s.phi), std::sin(s.theta) * std::sin(s.phi), std::cos(s.theta)};
}

double angle(const LeggettSetting& a, const LeggettSetting& b) {
  const auto u = unit(a), v = unit(b);
  return std::acos(std::clamp(u[0] * v[0] + u[1] * v[1] + u[2] * v[2], -1.0, 1.0));
}

numerics::OptimizerConfig fast_config() {
  auto c = default_chsh_config();
  c.restarts = 4;
  c.max_iters = 2000;
  return c;
}

std::vector<ChshAngles> qubit_starts() {
  const double x = kPi / 16;
  return {{x, -x, -3 * x, 3 * x}, {-x, x, 3 * x, -3 * x}};
}

double b_max(const EtsParams& p, const Backend& b = Backend::analytic()) {
  return chsh_max(p, b, fast_config(), qubit_starts()).b_max;
}

}  // namespace

TEST_CASE("Leggett settings pair up at the azimuth offset") {
  for (double phi : {0.1, kLeggettPhi, 1.0}) {
    const LeggettSuite s = leggett_suite(phi);
    CHECK(angle(s.a1, s.b1) == doctest::Approx(phi).epsilon(1e-12));
    CHECK(angle(s.a2, s.b2) == doctest::Approx(phi).epsilon(1e-12));
    CHECK(angle(s.a2, s.b3) == doctest::Approx(phi).epsilon(1e-12));
    CHECK(angle(s.a3, s.b4) == doctest::Approx(phi).epsilon(1e-12));
    CHECK(angle(s.a1, s.b5) < 1e-12);
    CHECK(angle(s.a2, s.b6) < 1e-12);
    CHECK(angle(s.a3, s.b7) < 1e-12);
    CHECK(angle(s.a1, s.a2) == doctest::Approx(kPi / 2));
    CHECK(angle(s.a1, s.a3) == doctest::Approx(kPi / 2));
  }
  CHECK_THROWS_AS(leggett_suite(NAN), std::invalid_argument);
}

TEST_CASE("ideal qubit correlations give the 0.125 maximum") {
  // Perfect anticorrelation C = -a.b makes L = 4 + 4 cos(phi), so
  // L_script = 2 s - 8 s^2 with s = sin(phi/2), maximal at s = 1/8.
  auto script = [](double phi) { return 4.0 + 4.0 * std::cos(phi) - 8.0 + 2.0 * std::abs(std::sin(phi / 2)); };
  const double phi_star = 2.0 * std::asin(0.125);
  CHECK(script(phi_star) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(phi_star == doctest::Approx(kLeggettPhi).epsilon(1e-3));
  for (double phi = 0.01; phi < kPi / 2; phi += 0.01) CHECK(script(phi) <= 0.125 + 1e-14);
}

TEST_CASE("L never exceeds 8") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> lv(0.0, 3.0), ld(-1.0, 1.7), ue(0.05, 1.0), up(0.0, kPi / 2);
  for (int i = 0; i < 40; ++i) {
    const EtsParams p{std::pow(10.0, lv(rng)), std::pow(10.0, ld(rng)), ue(rng)};
    CHECK(leggett_L(p, up(rng)) <= 8.0 + 1e-9);
  }
}

TEST_CASE("pure-state L_script approaches the ideal value as d grows") {
  double prev = -10.0;
  for (double d : {0.5, 1.1, 3.0, 5.0, 10.0, 20.0, 40.0}) {
    const double v = leggett_script({1.0, d, 1.0}, kLeggettPhi);
    CHECK(v > prev);
    CHECK(v <= 0.125 + 1e-9);
    prev = v;
  }
  CHECK(std::abs(prev - 0.125) < 0.005);
}

TEST_CASE("phi optimisation lands near the ideal azimuth at large d") {
  const auto m = leggett_script_max({1.0, 40.0, 1.0}, true);
  CHECK(m.converged);
  CHECK(std::abs(m.phi - kLeggettPhi) < 0.01);
  CHECK(m.value >= leggett_script({1.0, 40.0, 1.0}, kLeggettPhi) - 1e-12);
}

TEST_CASE("fixed-phi mode reports the default azimuth") {
  const auto m = leggett_script_max({1.0, 2.0, 1.0}, false);
  CHECK(m.phi == kLeggettPhi);
  CHECK(m.value == leggett_script({1.0, 2.0, 1.0}, kLeggettPhi));
}

TEST_CASE("sine coefficient enters linearly") {
  const EtsParams p{1.0, 2.0, 1.0};
  LeggettOptions one;
  one.sine_coefficient = 1.0;
  const double s = std::abs(std::sin(kLeggettPhi / 2));
  CHECK(leggett_script(p, kLeggettPhi) - leggett_script(p, kLeggettPhi, one) == doctest::Approx(s).epsilon(1e-12));
}

TEST_CASE("unmirrored Bob settings wash out L") {
  const EtsParams p{1.0, 20.0, 1.0};
  LeggettOptions plain;
  plain.mirror_bob_azimuth = false;
  CHECK(leggett_L(p, kLeggettPhi, plain) < leggett_L(p, kLeggettPhi) - 1.0);
}

TEST_CASE("L is unchanged when every azimuth changes sign") {
  const LeggettSuite s = leggett_suite(kLeggettPhi);
  auto A = [](const LeggettSetting& x, double sg) { return LocalSetting::leggett({x.theta, sg * x.phi}); };
  auto pairs = [&](double sg) {
    return std::vector<thermal::SettingPair>{
        {A(s.a1, sg), A(s.b1, -sg)}, {A(s.a2, sg), A(s.b2, -sg)}, {A(s.a1, sg), A(s.b5, -sg)},
        {A(s.a2, sg), A(s.b6, -sg)}, {A(s.a2, sg), A(s.b3, -sg)}, {A(s.a3, sg), A(s.b4, -sg)},
        {A(s.a3, sg), A(s.b7, -sg)}};
  };
  auto L = [](const std::vector<double>& c) {
    return std::abs(c[0] + c[1] + c[2] + c[3]) + std::abs(c[4] + c[5] + c[3] + c[6]);
  };
  for (double V : {1.0, 10.0}) {
    for (double d : {0.7, 1.1, 3.0}) {
      const EtsParams p{V, d, 0.5};
      const double up = L(thermal::ensemble_correlations(Family::QubitEts, pairs(1.0), p));
      const double down = L(thermal::ensemble_correlations(Family::QubitEts, pairs(-1.0), p));
      CHECK(up == doctest::Approx(down).epsilon(1e-10));
      CHECK(up == doctest::Approx(leggett_L(p, kLeggettPhi)).epsilon(1e-12));
    }
  }
}

TEST_CASE("no violation of either inequality as d goes to zero") {
  const EtsParams p{1.0, 0.05, 1.0};
  CHECK(leggett_script(p, kLeggettPhi) < 0.0);
  CHECK(b_max(p) <= 2.0);
  CHECK(b_max({1000.0, 0.02, 0.05}) <= 2.0);
}

TEST_CASE("large separation nearly saturates the Tsirelson bound") {
  for (double eta : {1.0, 0.05}) {
    const double b = b_max({1000.0, 400.0, eta});
    CHECK(std::abs(b - kTsirelson) < 0.02);
    CHECK(b <= kTsirelson + 1e-6);
  }
}

TEST_CASE("optimised CHSH value grows with d at V = 1000, eta = 0.05") {
  double prev = 0.0;
  for (double d : {0.5, 1.0, 3.0, 5.0, 30.0, 400.0}) {
    const double b = b_max({1000.0, d, 0.05});
    CHECK(b >= prev - 1e-6);
    prev = b;
  }
  CHECK(prev > 2.0);
}

TEST_CASE("analytic and ensemble backends agree on the CHSH maximum") {
  for (const EtsParams& p : {EtsParams{4.0, 1.5, 0.3}, EtsParams{10.0, 3.0, 0.3}, EtsParams{50.0, 10.0, 0.3}}) {
    CHECK(std::abs(b_max(p) - b_max(p, Backend::ensemble_of(Family::QubitEts))) < 2e-3);
  }
}

TEST_CASE("CHSH maximum respects the Tsirelson bound on random points") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> lv(0.0, 3.0), ld(-1.0, 2.6), ue(0.05, 1.0);
  for (int i = 0; i < 6; ++i) {
    const EtsParams p{std::pow(10.0, lv(rng)), std::pow(10.0, ld(rng)), ue(rng)};
    CHECK(b_max(p) <= kTsirelson + 1e-6);
  }
}

TEST_CASE("coexistence window around d = 1.1 for the pure state") {
  const std::vector<double> d{0.8, 0.95, 1.1, 1.25, 1.4};
  std::vector<double> b, l;
  for (double x : d) {
    b.push_back(b_max({1.0, x, 1.0}));
    l.push_back(leggett_script({1.0, x, 1.0}, kLeggettPhi));
  }
  const auto w = window_containing(coexistence_windows(d, b, l), 1.1);
  REQUIRE(w.has_value());
  CHECK(w->lo <= 1.1);
  CHECK(w->hi >= 1.1);
}

TEST_CASE("coexistence windows on synthetic data") {
  const std::vector<double> d{1, 2, 3, 4, 5, 6, 7};
  const std::vector<double> b{1.9, 2.1, 2.2, 2.3, 1.5, 2.5, 2.6};
  const std::vector<double> l{-1, -1, -0.5, 0.1, -1, 0.0, -2};
  const auto w = coexistence_windows(d, b, l);
  REQUIRE(w.size() == 2);
  CHECK(w[0].lo == 2);
  CHECK(w[0].hi == 3);
  CHECK(w[1].lo == 6);
  CHECK(w[1].hi == 7);
  CHECK(window_containing(w, 2.5).has_value());
  CHECK_FALSE(window_containing(w, 4.0).has_value());
  CHECK(coexistence_windows({}, {}, {}).empty());
  CHECK_THROWS_AS(coexistence_windows(d, b, {1.0}), std::invalid_argument);
}

TEST_CASE("Bell value from the analytic and ensemble backends agree at fixed angles") {
  const ChshAngles a{0.2, -0.3, 0.5, 0.1};
  const EtsParams p{7.0, 2.5, 0.6};
  CHECK(bell_value(a, p, Backend::analytic()) ==
        doctest::Approx(bell_value(a, p, Backend::ensemble_of(Family::QubitEts))).epsilon(1e-9));
}
