#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "cvbell/coherent/engine.hpp"
#include "cvbell/fock/oracle.hpp"
#include "cvbell/inequalities/inequalities.hpp"
#include "cvbell/numerics/quadrature.hpp"
#include "doctest.h"

using namespace cvbell;
using namespace cvbell::fock;

namespace {

constexpr double kPi = std::numbers::pi;

double engine_correlation(const OracleScenario& s) {
  coherent::CoherentOperator op =
      s.family == Family::QubitEts ? coherent::ets_branch(s.alpha, s.beta) : coherent::alt_branch(s.alpha, s.d);
  op = coherent::apply_setting(op, s.setting_a, Mode::A, s.d);
  op = coherent::apply_setting(op, s.setting_b, Mode::B, s.d);
  return coherent::correlation(op, s.eta);
}

Matrix cat(Complex g, int dim) {
  const Vector v = fock_coherent(g, dim) + fock_coherent(-g, dim);
  const Matrix rho = v * v.adjoint();
  return rho / rho.trace().real();
}

double min_eig(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
  return es.eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("coherent vectors") {
  const Vector vac = fock_coherent(0.0, 30);
  CHECK(std::abs(vac(0) - Complex(1.0)) == 0.0);
  CHECK(vac.tail(29).norm() == 0.0);
  const Vector v = fock_coherent(1.5, 40);
  double mean = 0.0;
  for (int n = 0; n < 40; ++n) mean += n * std::norm(v(n));
  CHECK(std::abs(mean - 2.25) < 1e-8);
  const Complex ov = fock_coherent(-1.0, 30).dot(fock_coherent(1.0, 30));
  CHECK(std::abs(ov - Complex(std::exp(-2.0))) < 1e-9);
  CHECK_THROWS_AS(fock_coherent(3.0, 20), TruncationError);
}

TEST_CASE("displacement, Kerr and loss basics") {
  CHECK((fock_displace(0.0, 20) - Matrix::Identity(20, 20)).cwiseAbs().maxCoeff() < 1e-14);
  const Complex z{0.6, -0.8};
  CHECK((fock_displace(z, 40) * fock_coherent(0.0, 40) - fock_coherent(z, 40)).norm() < 1e-12);
  // Kerr action pins the phase convention.
  const Vector k = fock_kerr(40) * fock_coherent(1.0, 40);
  const Vector want = std::polar(1.0, -kPi / 4) * (fock_coherent(1.0, 40) + Complex(0.0, 1.0) * fock_coherent(-1.0, 40)) /
                      std::sqrt(2.0);
  CHECK((k - want).norm() < 1e-9);
  const Matrix rho = cat({1.0, 0.4}, 30);
  CHECK((fock_loss(rho, 1.0) - rho).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("channels are completely positive and trace preserving on test states") {
  const int dim = 30;
  for (Complex g : {Complex{0.5, 0.0}, Complex{1.2, 0.7}, Complex{0.0, 1.8}}) {
    const Matrix rho = cat(g, dim);
    for (double eta : {0.05, 0.4, 0.9}) {
      const Matrix out = fock_loss(rho, eta);
      CHECK(std::abs(out.trace() - Complex(1.0)) < 1e-10);
      CHECK(min_eig(out) >= -1e-8);
      CHECK((out - out.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    }
    const Matrix u = fock_displace({0.3, 0.2}, dim) * fock_kerr(dim);
    const Matrix out = u * rho * u.adjoint();
    CHECK(std::abs(out.trace() - Complex(1.0)) < 1e-10);
    CHECK(min_eig(out) >= -1e-8);
  }
}

TEST_CASE("loss channels compose") {
  const Matrix rho = cat({1.1, -0.5}, 30);
  CHECK((fock_loss(fock_loss(rho, 0.8), 0.25) - fock_loss(rho, 0.2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("sign operator") {
  const Matrix s = fock_sign(40);
  CHECK(std::abs(s(0, 0)) == 0.0);
  CHECK(std::abs(s(0, 1) - Complex(std::sqrt(2.0 / kPi))) < 1e-9);
  CHECK((s - s.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  CHECK(es.eigenvalues().minCoeff() >= -1.0 - 1e-8);
  CHECK(es.eigenvalues().maxCoeff() <= 1.0 + 1e-8);
}

TEST_CASE("sign binning does not depend on the quadrature scale") {
  // With x = a + a^+ instead of (a + a^+)/sqrt 2 the wavefunctions stretch by
  // sqrt 2 but sign(x) is unchanged, so every S_mn is the same.
  const int n = 8;
  const auto gl = numerics::gauss_legendre(32);
  auto psi = [](int k, double x) {
    std::vector<double> h(k + 1);
    h[0] = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
    if (k > 0) h[1] = std::sqrt(2.0) * x * h[0];
    for (int j = 1; j < k; ++j) h[j + 1] = std::sqrt(2.0 / (j + 1)) * x * h[j] - std::sqrt(double(j) / (j + 1)) * h[j - 1];
    return h[k];
  };
  const Matrix s = fock_sign(n + 2);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double acc = 0.0;
      const int panels = 40;
      const double upper = 20.0, h = upper / panels;
      for (int p = 0; p < panels; ++p) {
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
          const double y = h * (p + 0.5 * (gl.nodes[i] + 1.0));
          const double w = 0.5 * h * gl.weights[i] / std::sqrt(2.0);
          acc += w * (psi(a, y / std::sqrt(2.0)) * psi(b, y / std::sqrt(2.0)) -
                      psi(a, -y / std::sqrt(2.0)) * psi(b, -y / std::sqrt(2.0)));
        }
      }
      CHECK(std::abs(acc - s(a, b).real()) < 1e-10);
    }
  }
}

TEST_CASE("vacuum scenario has zero correlation") {
  OracleScenario s;
  s.alpha = 0.0;
  s.beta = 0.0;
  s.dim = 30;
  CHECK(std::abs(oracle_correlation(s)) < 1e-12);
}

TEST_CASE("oracle matches the engine at V = 1, d = 1") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-kPi / 2, kPi / 2);
  for (int i = 0; i < 4; ++i) {
    OracleScenario s;
    s.alpha = s.beta = s.d = 1.0;
    s.setting_a = LocalSetting::bell(u(rng));
    s.setting_b = LocalSetting::bell(u(rng));
    CHECK(std::abs(oracle_correlation(s) - engine_correlation(s)) < 1e-8);
  }
}

TEST_CASE("pure entangled coherent state at d = 1.1 violates CHSH in the oracle") {
  const EtsParams p{1.0, 1.1, 1.0};
  const double x = kPi / 16;
  const auto best = inequalities::chsh_max(p, inequalities::Backend::analytic(), inequalities::default_chsh_config(),
                                           {{x, -x, -3 * x, 3 * x}});
  auto c = [&](double ta, double tb) {
    OracleScenario s;
    s.alpha = s.beta = s.d = 1.1;
    s.setting_a = LocalSetting::bell(ta);
    s.setting_b = LocalSetting::bell(tb);
    return oracle_correlation(s);
  };
  const ChshAngles& a = best.angles;
  const double b = c(a.theta_a, a.theta_b) + c(a.theta_a2, a.theta_b) + c(a.theta_a, a.theta_b2) -
                   c(a.theta_a2, a.theta_b2);
  CHECK(std::abs(b) > 2.0);
  CHECK(std::abs(std::abs(b) - best.b_max) < 1e-8);
}

TEST_CASE("oracle guards against truncation") {
  OracleScenario s;
  s.alpha = s.beta = s.d = 2.0;
  s.setting_a = LocalSetting::leggett({kPi, kPi});
  s.setting_b = LocalSetting::leggett({kPi, kPi});
  s.dim = 12;
  CHECK_THROWS_AS(oracle_correlation(s), TruncationError);
}

TEST_CASE("mixer conserves the norm and matches the amplitude map") {
  const int dim = 20;
  Matrix c = Matrix::Zero(dim, dim);
  c.col(0) = fock_coherent({0.9, 0.3}, dim);
  TwoModeState st(c);
  st.beamsplit(1.0 / std::sqrt(2.0));
  CHECK(std::abs(st.norm2() - 1.0) < 1e-12);
  const Complex g = Complex{0.9, 0.3} / std::sqrt(2.0);
  const Matrix want = fock_coherent(g, dim) * fock_coherent(-g, dim).transpose();
  CHECK((st.coeffs() - want).cwiseAbs().maxCoeff() < 1e-10);
}
