#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cvbell/numerics/optimizer.hpp"
#include "cvbell/numerics/quadrature.hpp"
#include "cvbell/numerics/special.hpp"
#include "doctest.h"
#include "erf_reference.inc"

using namespace cvbell;
using namespace cvbell::numerics;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("faddeeva at reference points") {
  CHECK(std::abs(faddeeva({0.0, 0.0}) - Complex(1.0, 0.0)) == 0.0);
  CHECK(std::abs(faddeeva({0.0, 1.0}) - Complex(0.4275835761558070, 0.0)) < 1e-15);
  CHECK(std::abs(faddeeva({1.0, 1.0}) - Complex(0.304744205256912593, 0.208218938202831633)) < 1e-12);
}

TEST_CASE("faddeeva matches the multiprecision table") {
  for (const auto& row : kFaddeevaTable) {
    const Complex want{row[2], row[3]};
    CAPTURE(row[0]);
    CAPTURE(row[1]);
    CHECK(std::abs(faddeeva({row[0], row[1]}) - want) <= 1e-12 * std::abs(want));
  }
}

TEST_CASE("erf and erfi match the multiprecision table") {
  for (const auto& row : kErfTable) {
    const Complex z{row[0], row[1]};
    const Complex e{row[2], row[3]}, ei{row[4], row[5]};
    CAPTURE(z);
    CHECK(std::abs(erf(z) - e) <= 1e-12 * std::max(std::abs(e), 1e-300));
    CHECK(std::abs(erfi(z) - ei) <= 1e-12 * std::max(std::abs(ei), 1e-300));
  }
}

TEST_CASE("reflection w(-z) = 2 exp(-z^2) - w(z)") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 500; ++i) {
    const Complex z{u(rng), u(rng)};
    const Complex g = 2.0 * std::exp(-z * z);
    const Complex lhs = faddeeva(-z), rhs = g - faddeeva(z);
    // rhs is a difference of two terms of size |g|; relative to them.
    const double scale = std::max({1.0, std::abs(g), std::abs(rhs)});
    CAPTURE(z);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * scale);
  }
}

TEST_CASE("erf basics") {
  CHECK(erf(Complex{0.0, 0.0}) == Complex{0.0, 0.0});
  CHECK(std::abs(erf(Complex{2.0, 0.0}) - Complex(0.9953222650189527, 0.0)) < 1e-15);
  for (double x = -7.0; x <= 7.0; x += 0.01) {
    CHECK(std::abs(erf(Complex{x, 0.0}).real() + std::erfc(x) - 1.0) < 2e-16);
    CHECK(erf(Complex{x, 0.0}).imag() == 0.0);
  }
}

TEST_CASE("erfi is real and odd on the real axis") {
  for (double x = 0.05; x < 6.0; x += 0.05) {
    CHECK(erfi(-x) == -erfi(x));
    CHECK(erfi(Complex{x, 0.0}).imag() == 0.0);
    CHECK(std::abs(erfi(Complex{x, 0.0}).real() - erfi(x)) <= 1e-14 * std::abs(erfi(x)));
  }
}

TEST_CASE("scaled erf reassembles erf and survives overflow") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  for (int i = 0; i < 300; ++i) {
    const Complex z{u(rng), u(rng)};
    const Complex direct = erf(z);
    if (!std::isfinite(std::abs(direct))) continue;
    CAPTURE(z);
    CHECK(std::abs(erf_scaled(z).value() - direct) <= 1e-11 * std::max(1.0, std::abs(direct)));
  }
  // erf(1 + 40i) ~ exp(1599): only the log-scaled form is representable.
  const ScaledErf big = erf_scaled({1.0, 40.0});
  CHECK(std::isfinite(big.log_scale.real()));
  CHECK(big.log_scale.real() > 1500.0);
  CHECK(std::isfinite(std::abs(big.mantissa)));
}

TEST_CASE("Gauss-Hermite closed forms") {
  const auto r1 = gauss_hermite(1);
  REQUIRE(r1.nodes.size() == 1);
  CHECK(r1.nodes[0] == doctest::Approx(0.0));
  CHECK(r1.weights[0] == doctest::Approx(std::sqrt(kPi)).epsilon(1e-15));
  const auto r2 = gauss_hermite(2);
  CHECK(r2.nodes[0] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(r2.nodes[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(r2.weights[0] == doctest::Approx(std::sqrt(kPi) / 2).epsilon(1e-15));
  CHECK(r2.weights[1] == doctest::Approx(std::sqrt(kPi) / 2).epsilon(1e-15));
  const auto r3 = gauss_hermite(3);
  double m4 = 0.0;
  for (int i = 0; i < 3; ++i) m4 += r3.weights[i] * std::pow(r3.nodes[i], 4);
  CHECK(std::abs(m4 - 3.0 * std::sqrt(kPi) / 4.0) < 1e-12);
}

TEST_CASE("Gauss-Hermite weights and symmetry for every order") {
  for (int n = 1; n <= kMaxHermiteOrder; n += (n < 40 ? 1 : 17)) {
    const auto r = gauss_hermite(n);
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      CHECK(r.weights[i] > 0.0);
      CHECK(std::abs(r.nodes[i] + r.nodes[n - 1 - i]) < 1e-12 * std::max(1.0, std::abs(r.nodes[i])));
      if (i) CHECK(r.nodes[i] > r.nodes[i - 1]);
      s += r.weights[i];
    }
    CAPTURE(n);
    CHECK(std::abs(s - std::sqrt(kPi)) < 1e-12);
  }
  CHECK_THROWS_AS(gauss_hermite(0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_hermite(kMaxHermiteOrder + 1), std::invalid_argument);
}

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1") {
  for (int n : {1, 4, 16}) {
    const auto r = gauss_legendre(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
      const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
      CHECK(std::abs(s - exact) < 1e-14);
    }
  }
}

TEST_CASE("minimize on a parabola") {
  OptimizerConfig c;
  c.bounds = {{-5.0, 5.0}};
  c.restarts = 4;
  const auto r = minimize([](std::span<const double> x) { return (x[0] - 1.0) * (x[0] - 1.0); }, c);
  CHECK(std::abs(r.argmin[0] - 1.0) < 1e-6);
  CHECK(r.converged);
}

TEST_CASE("minimize on Rosenbrock") {
  OptimizerConfig c;
  c.bounds = {{-2.0, 2.0}, {-2.0, 2.0}};
  c.restarts = 8;
  c.max_iters = 2000;
  c.tolerance = 1e-10;
  const auto f = [](std::span<const double> x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  const auto r = minimize(f, c);
  CHECK(std::abs(r.argmin[0] - 1.0) < 1e-4);
  CHECK(std::abs(r.argmin[1] - 1.0) < 1e-4);
}

namespace {
double bumpy(std::span<const double> x) {
  return std::sin(3 * x[0]) * std::cos(2 * x[1]) + 0.1 * (x[0] * x[0] + x[1] * x[1]);
}
}  // namespace

TEST_CASE("minimize is deterministic and thread-count independent") {
  OptimizerConfig c;
  c.bounds = {{-3.0, 3.0}, {-3.0, 3.0}};
  c.restarts = 6;
  c.seed = 99;
  const auto a = minimize(bumpy, c), b = minimize(bumpy, c);
  c.threads = 3;
  const auto t = minimize(bumpy, c);
  CHECK(a.min == b.min);
  CHECK(a.argmin == b.argmin);
  CHECK(a.evaluations == b.evaluations);
  CHECK(t.min == a.min);
  CHECK(t.argmin == a.argmin);
  CHECK(t.best_restart == a.best_restart);
}

TEST_CASE("best of k restarts never worse than best of k-1") {
  OptimizerConfig c;
  c.bounds = {{-3.0, 3.0}, {-3.0, 3.0}};
  c.seed = 5;
  double prev = INFINITY;
  for (int k = 1; k <= 10; ++k) {
    c.restarts = k;
    const double m = minimize(bumpy, c).min;
    CHECK(m <= prev);
    prev = m;
  }
}

TEST_CASE("warm starts take the first restarts") {
  OptimizerConfig c;
  c.bounds = {{-3.0, 3.0}};
  c.restarts = 1;
  const auto f = [](std::span<const double> x) { return std::cos(4 * x[0]) + 0.01 * x[0]; };
  const auto near = minimize(f, c, {{2.3}});
  CHECK(std::abs(near.argmin[0] - (kPi + std::asin(0.01 / 4)) / 4 - kPi / 2) < 0.05);
  CHECK(near.best_restart == 0);
}

TEST_CASE("optimizer config validation") {
  OptimizerConfig c;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);  // no bounds
  c.bounds = {{1.0, 0.0}};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.bounds = {{0.0, 1.0}};
  c.restarts = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.restarts = 1;
  CHECK_NOTHROW(c.validate());
}
