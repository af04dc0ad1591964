#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "cvbell/analytic/chsh.hpp"
#include "cvbell/cli/commands.hpp"
#include "cvbell/coherent/engine.hpp"
#include "cvbell/fock/oracle.hpp"
#include "cvbell/numerics/quadrature.hpp"
#include "cvbell/numerics/special.hpp"
#include "cvbell/thermal/ensemble.hpp"

#include "erf_reference.inc"

namespace cvbell::cli {
namespace {

constexpr double kPi = std::numbers::pi;

class Report {
 public:
  explicit Report(std::ostream& log) : log_(log) {}

  void add(const std::string& name, double error, double tol) {
    Check c{name, error, tol, std::isfinite(error) && error <= tol};
    char line[256];
    std::snprintf(line, sizeof line, "[%s] %-58s err=%.3e tol=%.1e", c.pass ? "PASS" : "FAIL", name.c_str(),
                  error, tol);
    log_ << line << std::endl;
    checks_.push_back(c);
  }

  // Runs body; an exception counts as a failed check.
  template <class F>
  void guarded(const std::string& name, double tol, F body) {
    try {
      add(name, body(), tol);
    } catch (const std::exception& e) {
      log_ << "[FAIL] " << name << " threw: " << e.what() << std::endl;
      checks_.push_back({name, INFINITY, tol, false});
    }
  }

  std::vector<Check> take() { return std::move(checks_); }

 private:
  std::ostream& log_;
  std::vector<Check> checks_;
};

using coherent::CoherentOperator;

CoherentOperator engine_branch(Family f, Complex alpha, Complex beta, double d) {
  return f == Family::QubitEts ? coherent::ets_branch(alpha, beta) : coherent::alt_branch(alpha, d);
}

double engine_correlation(const fock::OracleScenario& s) {
  CoherentOperator op = engine_branch(s.family, s.alpha, s.beta, s.d);
  op = coherent::apply_setting(op, s.setting_a, Mode::A, s.d);
  op = coherent::apply_setting(op, s.setting_b, Mode::B, s.d);
  return coherent::correlation(op, s.eta);
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

fock::Matrix cat_density(Complex g, int dim) {
  const fock::Vector v = fock::fock_coherent(g, dim) + fock::fock_coherent(-g, dim);
  fock::Matrix rho = v * v.adjoint();
  return rho / rho.trace().real();
}

double hermiticity(const fock::Matrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

double min_eigenvalue(const fock::Matrix& m) {
  Eigen::SelfAdjointEigenSolver<fock::Matrix> es(0.5 * (m + m.adjoint()));
  return es.eigenvalues().minCoeff();
}

// Small amplitudes: every label stays below ~4, well inside dim 60.
fock::OracleScenario random_scenario(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  fock::OracleScenario s;
  s.family = u(rng) < 0.5 ? Family::QubitEts : Family::AltEts;
  s.d = 0.6 + 0.6 * u(rng);
  s.alpha = {s.d + 0.3 * (u(rng) - 0.5), 0.3 * (u(rng) - 0.5)};
  s.beta = {s.d + 0.3 * (u(rng) - 0.5), 0.3 * (u(rng) - 0.5)};
  s.eta = 0.2 + 0.8 * u(rng);
  if (u(rng) < 0.5) {
    s.setting_a = LocalSetting::bell(kPi * (2 * u(rng) - 1) / 2);
    s.setting_b = LocalSetting::bell(kPi * (2 * u(rng) - 1) / 2);
  } else {
    s.setting_a = LocalSetting::leggett({kPi * u(rng), kPi * (u(rng) - 0.5)});
    s.setting_b = LocalSetting::leggett({kPi * u(rng), kPi * (u(rng) - 0.5)});
  }
  return s;
}

void special_function_checks(Report& r) {
  r.guarded("faddeeva vs 40-digit reference table", 1e-12, [] {
    double worst = 0.0;
    for (const auto& row : kFaddeevaTable) {
      const Complex w = numerics::faddeeva({row[0], row[1]});
      worst = std::max(worst, std::abs(w - Complex(row[2], row[3])) / std::abs(Complex(row[2], row[3])));
    }
    return worst;
  });
  r.guarded("erf / erfi vs 40-digit reference table", 1e-12, [] {
    double worst = 0.0;
    for (const auto& row : kErfTable) {
      const Complex z{row[0], row[1]};
      const Complex e{row[2], row[3]}, ei{row[4], row[5]};
      worst = std::max(worst, std::abs(numerics::erf(z) - e) / std::max(1e-300, std::abs(e)));
      worst = std::max(worst, std::abs(numerics::erfi(z) - ei) / std::max(1e-300, std::abs(ei)));
    }
    return worst;
  });
  r.guarded("real erf agrees with std::erf on [-6, 6]", 1e-14, [] {
    double worst = 0.0;
    for (double x = -6.0; x <= 6.0; x += 0.05) {
      worst = std::max(worst, std::abs(numerics::erf(Complex(x, 0.0)).real() - std::erf(x)));
    }
    return worst;
  });
  r.guarded("Gauss-Hermite weights sum to sqrt(pi) (orders 1..60)", 1e-13, [] {
    double worst = 0.0;
    for (int n = 1; n <= 60; ++n) {
      double s = 0.0;
      for (double w : numerics::gauss_hermite(n).weights) s += w;
      worst = std::max(worst, std::abs(s - std::sqrt(kPi)));
    }
    return worst;
  });
  r.guarded("Gauss-Hermite order 20 integrates x^38 e^{-x^2} exactly", 1e-12, [] {
    const auto q = numerics::gauss_hermite(20);
    double s = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * std::pow(q.nodes[i], 38);
    const double exact = std::tgamma(19.5);
    return std::abs(s - exact) / exact;
  });
}

void analytic_vs_engine(Report& r, bool full) {
  if (!full) {
    const double pts[][3] = {{0.3, -0.3, 1.0}, {1.1, 0.4, 0.6}, {-0.7, 2.0, 0.2}, {0.0, 0.0, 0.05}};
    for (const auto& p : pts) {
      char name[96];
      std::snprintf(name, sizeof name, "closed form vs engine (%.1f, %.1f, eta %.2f) V=1 d=1", p[0], p[1], p[2]);
      r.guarded(name, 1e-6, [&] {
        const EtsParams ep{1.0, 1.0, p[2]};
        const fock::OracleScenario s{Family::QubitEts, 1.0, 1.0, 1.0, p[2], LocalSetting::bell(p[0]),
                                     LocalSetting::bell(p[1])};
        return std::abs(analytic::closed_form_correlation(p[0], p[1], ep) - engine_correlation(s));
      });
    }
    return;
  }
  for (double eta : {0.05, 0.5, 1.0}) {
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        const double ta = -kPi / 2 + i * kPi / 4, tb = -kPi / 2 + j * kPi / 4;
        char name[96];
        std::snprintf(name, sizeof name, "closed form vs engine (%+.3f, %+.3f, eta %.2f)", ta, tb, eta);
        r.guarded(name, 1e-6, [&] {
          const fock::OracleScenario s{Family::QubitEts, 1.0, 1.0, 1.0, eta, LocalSetting::bell(ta),
                                       LocalSetting::bell(tb)};
          return std::abs(analytic::closed_form_correlation(ta, tb, {1.0, 1.0, eta}) - engine_correlation(s));
        });
      }
    }
  }
}

void engine_vs_oracle(Report& r, bool full) {
  // Fixed scenarios covering both families and both setting types.
  const std::vector<fock::OracleScenario> fixed = {
      {Family::QubitEts, 0.8, 0.8, 0.8, 1.0, LocalSetting::bell(0.4), LocalSetting::bell(-0.3)},
      {Family::QubitEts, {0.7, 0.1}, {0.9, -0.2}, 0.8, 0.6, LocalSetting::bell(1.2), LocalSetting::bell(0.2)},
      {Family::QubitEts, 0.9, 0.9, 0.9, 0.7, LocalSetting::leggett({kPi / 2, 0.25}),
       LocalSetting::leggett({0.25, kPi / 2})},
      {Family::AltEts, 0.9, 0.0, 0.9, 1.0, LocalSetting::bell(0.5), LocalSetting::bell(-0.5)},
      {Family::AltEts, 0.8, 0.0, 0.8, 0.4, LocalSetting::leggett({1.0, 0.3}), LocalSetting::leggett({0.5, -0.3})},
  };
  int k = 0;
  for (const auto& s : fixed) {
    r.guarded("engine vs Fock oracle, scenario " + std::to_string(++k), 1e-8,
              [&] { return std::abs(engine_correlation(s) - fock::oracle_correlation(s)); });
  }
  r.guarded("engine vs Fock oracle, unnormalised sign moments", 1e-8, [&] {
    const auto& s = fixed[2];
    CoherentOperator op = engine_branch(s.family, s.alpha, s.beta, s.d);
    op = coherent::apply_setting(coherent::apply_setting(op, s.setting_a, Mode::A, s.d), s.setting_b, Mode::B, s.d);
    const auto m = coherent::sign_moments(op, s.eta);
    const auto o = fock::oracle_sign_moments(s);
    return std::max({rel(m.trace, o[0]), rel(m.sa, o[1]), rel(m.sb, o[2]), rel(m.sab, o[3])});
  });
  const int n = full ? 100 : 8;
  r.guarded("engine vs Fock oracle, " + std::to_string(n) + " random scenarios (max)", 1e-8, [&] {
    std::mt19937_64 rng(20240611);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const auto s = random_scenario(rng);
      worst = std::max(worst, std::abs(engine_correlation(s) - fock::oracle_correlation(s)));
    }
    return worst;
  });
  if (full) {
    r.guarded("oracle truncation doubling dim 40 -> 80", 1e-8, [&] {
      double worst = 0.0;
      for (auto s : fixed) {
        s.dim = 40;
        const double a = fock::oracle_correlation(s);
        s.dim = 80;
        worst = std::max(worst, std::abs(a - fock::oracle_correlation(s)));
      }
      return worst;
    });
  }
}

void channel_invariants(Report& r) {
  const int dim = 40;
  const fock::Matrix rho = cat_density({1.2, 0.3}, dim);
  r.guarded("oracle loss preserves trace", 1e-10,
            [&] { return std::abs(fock::fock_loss(rho, 0.37).trace() - Complex(1.0)); });
  r.guarded("oracle loss output Hermitian", 1e-10, [&] { return hermiticity(fock::fock_loss(rho, 0.37)); });
  r.guarded("oracle loss output positive (min eigenvalue)", 1e-8,
            [&] { return std::max(0.0, -min_eigenvalue(fock::fock_loss(rho, 0.37))); });
  r.guarded("oracle loss(0.6) o loss(0.5) = loss(0.3)", 1e-10, [&] {
    return (fock::fock_loss(fock::fock_loss(rho, 0.6), 0.5) - fock::fock_loss(rho, 0.3)).cwiseAbs().maxCoeff();
  });
  r.guarded("oracle loss adjoint duality Tr[L(rho) S] = Tr[rho L'(S)]", 1e-10, [&] {
    const fock::Matrix s = fock::fock_sign(dim);
    return std::abs((fock::fock_loss(rho, 0.45) * s).trace() - (rho * fock::fock_loss_adjoint(s, 0.45)).trace());
  });
  r.guarded("oracle sign operator spectrum within [-1, 1]", 1e-8, [&] {
    Eigen::SelfAdjointEigenSolver<fock::Matrix> es(fock::fock_sign(dim));
    return std::max(0.0, es.eigenvalues().cwiseAbs().maxCoeff() - 1.0);
  });
  r.guarded("oracle displacement unitary on low block", 1e-10, [&] {
    const fock::Matrix u = fock::fock_displace({0.7, -0.4}, dim);
    return ((u.adjoint() * u).topLeftCorner(15, 15) - fock::Matrix::Identity(15, 15)).cwiseAbs().maxCoeff();
  });
  r.guarded("oracle mixer conserves norm", 1e-10, [&] {
    fock::Matrix c = fock::Matrix::Zero(20, 20);
    c.col(0) = fock::fock_coherent({0.8, 0.2}, 20);
    fock::TwoModeState st(c);
    st.beamsplit(0.6);
    return std::abs(st.norm2() - 1.0);
  });
}

void engine_invariants(Report& r) {
  const CoherentOperator base = coherent::ets_branch({1.1, 0.2}, {0.9, -0.1});
  const Complex tr0 = base.trace();
  r.guarded("engine displacement preserves trace", 1e-12,
            [&] { return rel(coherent::displace(base, Mode::A, {0.3, 0.8}).trace(), tr0); });
  r.guarded("engine Kerr preserves trace", 1e-12, [&] { return rel(coherent::kerr(base, Mode::B).trace(), tr0); });
  r.guarded("engine mixer preserves trace", 1e-12,
            [&] { return rel(coherent::beamsplit(base, 0.6).trace(), tr0); });
  r.guarded("engine loss preserves trace", 1e-12,
            [&] { return rel(coherent::loss(base, Mode::A, 0.3).trace(), tr0); });
  const CoherentOperator set = coherent::apply_setting(
      coherent::apply_setting(base, LocalSetting::bell(0.7), Mode::A, 1.0),
      LocalSetting::leggett({1.0, 0.4}), Mode::B, 1.0);
  r.guarded("engine state Hermitian after settings", 0.0,
            [&] { return coherent::is_hermitian(set) ? 0.0 : 1.0; });
  r.guarded("engine state Hermitian after loss", 0.0,
            [&] { return coherent::is_hermitian(coherent::loss(set, Mode::A, 0.4)) ? 0.0 : 1.0; });
  r.guarded("engine loss(0.6) o loss(0.5) = loss(0.3) (sign moments)", 1e-10, [&] {
    const CoherentOperator once = coherent::loss(coherent::loss(set, Mode::A, 0.6), Mode::B, 0.6);
    const auto a = coherent::sign_moments(once, 0.5);
    const auto b = coherent::sign_moments(set, 0.3);
    return std::max({rel(a.trace, b.trace), rel(a.sa, b.sa), rel(a.sb, b.sb), rel(a.sab, b.sab)});
  });
  r.guarded("joint probabilities normalised", 1e-12,
            [&] { return std::abs(coherent::joint_probs(set, 0.3).total() - 1.0); });
  r.guarded("joint probabilities reproduce the correlation", 1e-12, [&] {
    return std::abs(coherent::joint_probs(set, 0.3).correlation() - coherent::correlation(set, 0.3));
  });
  r.guarded("joint probabilities non-negative", 1e-12, [&] {
    const auto p = coherent::joint_probs(set, 0.3);
    return std::max(0.0, -std::min({p.pp, p.pm, p.mp, p.mm}));
  });
}

void bound_checks(Report& r) {
  r.guarded("|C| <= 1 on 200 random closed-form points", 1e-12, [] {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double excess = 0.0;
    for (int i = 0; i < 200; ++i) {
      const EtsParams p{1.0 + 999.0 * u(rng) * u(rng), 0.1 + 10.0 * u(rng), 0.02 + 0.98 * u(rng)};
      const double c = analytic::closed_form_correlation(kPi * (2 * u(rng) - 1), kPi * (2 * u(rng) - 1), p);
      excess = std::max(excess, std::abs(c) - 1.0);
    }
    return std::max(0.0, excess);
  });
  r.guarded("|C| <= 1 on random ensemble points (both families)", 1e-12, [] {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double excess = 0.0;
    for (int i = 0; i < 6; ++i) {
      const EtsParams p{1.0 + 20.0 * u(rng), 0.3 + 3.0 * u(rng), 0.1 + 0.9 * u(rng)};
      const Family f = i % 2 ? Family::AltEts : Family::QubitEts;
      const double c = thermal::ensemble_correlation(f, LocalSetting::bell(2 * u(rng) - 1),
                                                     LocalSetting::leggett({kPi * u(rng), u(rng)}), p)
                           .value;
      excess = std::max(excess, std::abs(c) - 1.0);
    }
    return std::max(0.0, excess);
  });
  r.guarded("closed-form |B| <= 2 sqrt 2 at the ideal angles", 1e-9, [] {
    const double x = kPi / 16;
    return std::max(0.0, std::abs(analytic::bell_b({x, -x, -3 * x, 3 * x}, {1.0, 8.0, 1.0})) - 2 * std::sqrt(2.0));
  });
}

void ensemble_checks(Report& r) {
  r.guarded("qubit ensemble at V=1 equals engine", 1e-10, [] {
    const EtsParams p{1.0, 0.9, 0.7};
    const auto sa = LocalSetting::bell(0.4), sb = LocalSetting::leggett({1.2, -0.3});
    return std::abs(thermal::ensemble_correlation(Family::QubitEts, sa, sb, p).value -
                    engine_correlation({Family::QubitEts, 0.9, 0.9, 0.9, 0.7, sa, sb}));
  });
  r.guarded("alt ensemble at V=1 equals engine", 1e-10, [] {
    const EtsParams p{1.0, 0.9, 0.7};
    const auto sa = LocalSetting::bell(-0.6), sb = LocalSetting::bell(0.3);
    return std::abs(thermal::ensemble_correlation(Family::AltEts, sa, sb, p).value -
                    engine_correlation({Family::AltEts, 0.9, 0.0, 0.9, 0.7, sa, sb}));
  });
  r.guarded("qubit ensemble near V=1 approaches the pure value", 1e-3, [] {
    const auto sa = LocalSetting::bell(0.4), sb = LocalSetting::bell(-0.4);
    return std::abs(thermal::ensemble_correlation(Family::QubitEts, sa, sb, {1.001, 1.0, 0.8}).value -
                    thermal::ensemble_correlation(Family::QubitEts, sa, sb, {1.0, 1.0, 0.8}).value);
  });
  r.guarded("ensemble trace equals 1 + exp(-4d^2/V)/V^2", 1e-12, [] {
    const EtsParams p{2.5, 0.6, 1.0};
    return std::abs(thermal::ensemble_trace(Family::QubitEts, p) - analytic::ensemble_norm(p));
  });
  r.guarded("moment scheme vs closed form (V=4, d=1.3, eta=0.4)", 1e-9, [] {
    const EtsParams p{4.0, 1.3, 0.4};
    return std::abs(thermal::ensemble_correlation(Family::QubitEts, LocalSetting::bell(0.5),
                                                  LocalSetting::bell(-0.2), p)
                        .value -
                    analytic::closed_form_correlation(0.5, -0.2, p));
  });
  thermal::EnsembleOptions quad;
  quad.scheme = thermal::Scheme::Quadrature;
  r.guarded("quadrature converges under order doubling (V=2, qubit)", 1e-4, [&] {
    const auto v = thermal::ensemble_correlation(Family::QubitEts, LocalSetting::bell(0.5),
                                                 LocalSetting::bell(-0.2), {2.0, 1.0, 0.6}, quad);
    return v.converged ? v.order_change : INFINITY;
  });
  r.guarded("quadrature converges under order doubling (V=2, alt)", 1e-4, [&] {
    const auto v = thermal::ensemble_correlation(Family::AltEts, LocalSetting::bell(0.5), LocalSetting::bell(-0.2),
                                                 {2.0, 1.0, 0.6}, quad);
    return v.converged ? v.order_change : INFINITY;
  });
  r.guarded("quadrature agrees with moment scheme (V=2, alt)", 1e-4, [&] {
    const EtsParams p{2.0, 1.0, 0.6};
    const auto sa = LocalSetting::bell(0.5), sb = LocalSetting::bell(-0.2);
    return std::abs(thermal::ensemble_correlation(Family::AltEts, sa, sb, p, quad).value -
                    thermal::ensemble_correlation(Family::AltEts, sa, sb, p).value);
  });
  r.guarded("linear entropy of the pure state is 0 (3 stderr)", 0.0, [] {
    const auto e = thermal::linear_entropy(1.0, 2.0, 10000, 3);
    return std::max(0.0, std::abs(e.value) - 3 * e.std_error);
  });
  r.guarded("linear entropy at V=1000, d=3 exceeds 0.999", 0.0, [] {
    const auto e = thermal::linear_entropy(1000.0, 3.0, 10000, 3);
    return std::max(0.0, 0.999 - e.value);
  });
}

}  // namespace

std::vector<Check> run_validation(const std::string& suite, std::ostream& log) {
  if (suite != "quick" && suite != "full") throw ConfigError("suite must be 'quick' or 'full'");
  const bool full = suite == "full";
  Report r(log);
  special_function_checks(r);
  analytic_vs_engine(r, full);
  engine_vs_oracle(r, full);
  channel_invariants(r);
  engine_invariants(r);
  bound_checks(r);
  ensemble_checks(r);
  return r.take();
}

}  // namespace cvbell::cli
