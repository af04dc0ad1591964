// Acceptance checks AC1..AC10. One PASS/FAIL line per criterion, with the
// measured quantities and wall time; exit status is the number of failures.
//
//   acceptance [--only AC3] [--reduced] [--threads N]
//
// --reduced shrinks the alternative-state grid of AC3 to 2 x 4 cells.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cvbell/analytic/chsh.hpp"
#include "cvbell/cli/commands.hpp"
#include "cvbell/coherent/engine.hpp"
#include "cvbell/fock/oracle.hpp"
#include "cvbell/inequalities/inequalities.hpp"
#include "cvbell/thermal/ensemble.hpp"
#include "fock_bridge.hpp"

using namespace cvbell;
namespace ineq = cvbell::inequalities;

namespace {

constexpr double kPi = std::numbers::pi;
const double kTsirelson = 2.0 * std::sqrt(2.0);

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double num(const cli::Cell& c) { return std::get<double>(c); }

cli::Table run_preset(const std::string& id, int threads) {
  auto p = cli::figure_preset(id);
  p.config.threads = threads;
  int bad = 0;
  return p.command == "bell-surface" ? cli::bell_surface(p.config, "figure", &bad)
                                     : cli::leggett_scan(p.config, "figure", &bad);
}

// Widest window in the first (V, eta) line of a Leggett scan.
std::optional<ineq::Window> widest(const cli::Table& t, const char* key = "fixed_phi") {
  std::optional<ineq::Window> best;
  for (const auto& w : t.extra["coexistence_windows"][0][key]) {
    const ineq::Window x{w[0].get<double>(), w[1].get<double>()};
    if (!best || x.hi - x.lo > best->hi - best->lo) best = x;
  }
  return best;
}

std::string show(const std::optional<ineq::Window>& w) {
  return w ? fmt("[%.4g, %.4g]", w->lo, w->hi) : std::string("none");
}

bool strictly_contains(const std::optional<ineq::Window>& outer, const std::optional<ineq::Window>& inner) {
  return outer && inner && outer->lo < inner->lo && outer->hi > inner->hi;
}

double chsh(const EtsParams& p) {
  return ineq::chsh_max(p, ineq::Backend::analytic(), ineq::default_chsh_config(), cli::chsh_warm_starts()).b_max;
}

Outcome ac1() {
  const double b1 = chsh({1000.0, 5.0, 1.0});
  const double b005 = chsh({1000.0, 5.0, 0.05});
  const bool ok = b1 >= 2.80 && b1 <= kTsirelson + 1e-6 && std::abs(b005 - b1) <= 0.05;
  return {ok, fmt("B(eta=1)=%.6f B(eta=0.05)=%.6f need B(eta=1) in [2.80, %.6f], |diff| <= 0.05", b1, b005,
                  kTsirelson + 1e-6)};
}

// Per (V, eta) line of a bell-surface table: B over increasing d.
std::vector<std::pair<double, std::vector<std::pair<double, double>>>> lines(const cli::Table& t) {
  std::vector<std::pair<double, std::vector<std::pair<double, double>>>> out;
  for (const auto& r : t.rows) {
    const double V = num(r[0]);
    if (out.empty() || out.back().first != V) out.push_back({V, {}});
    out.back().second.push_back({num(r[1]), num(r[3])});
  }
  return out;
}

Outcome ac2(int threads) {
  const auto t = run_preset("1b", threads);
  bool ok = true;
  std::string rows;
  for (const auto& [V, pts] : lines(t)) {
    const double lo = pts.front().second, hi = pts.back().second;
    ok = ok && lo <= 2.0 && hi > 2.0;
    rows += fmt(" V=%.4g:%.3f->%.3f", V, lo, hi);
  }
  return {ok, "B(d_min)->B(d_max) per V at eta=0.05;" + rows};
}

Outcome ac3(int threads, bool reduced) {
  auto p = cli::figure_preset("1c");
  p.config.threads = threads;
  if (reduced) {
    p.config.V = cli::parse_range("1:1000(log):2");
    p.config.d = cli::parse_range("0.5:400(log):4");
  }
  int bad = 0;
  const auto t = cli::bell_surface(p.config, "figure", &bad);
  bool any = false, ok = true;
  std::string pattern;
  for (const auto& [V, pts] : lines(t)) {
    bool seen = false;
    pattern += fmt(" V=%.4g:", V);
    for (const auto& [d, b] : pts) {
      const bool v = b > 2.0;
      pattern += v ? '+' : '-';
      if (seen && !v) ok = false;  // violation must persist once it appears
      seen = seen || v;
      any = any || v;
    }
    ok = ok && pts.front().second <= 2.0 && pts.back().second > 2.0;
  }
  return {ok && any, fmt("alt ensemble sign pattern (+ is B>2, d increasing)%s; %d nonconverged", pattern.c_str(),
                         bad)};
}

Outcome ac4(int threads) {
  const auto t = run_preset("2a", threads);
  std::optional<ineq::Window> hit;
  for (const auto& w : t.extra["coexistence_windows"][0]["fixed_phi"]) {
    const ineq::Window x{w[0].get<double>(), w[1].get<double>()};
    if (x.lo <= 1.1 && 1.1 <= x.hi) hit = x;
  }
  return {hit.has_value(), "window containing d=1.1 at V=1, eta=1: " + show(hit) +
                               "; phi-optimised widest " + show(widest(t, "optimized_phi"))};
}

Outcome ac5() {
  const EtsParams p{1.0, 3.0, 1.0};
  const double l = ineq::leggett_script(p, 0.25);
  const auto m = ineq::leggett_script_max(p, true);
  const bool lok = std::abs(l - 0.125) <= 0.01, pok = m.converged && std::abs(m.phi - 0.2507) <= 0.01;
  return {lok && pok, fmt("L_script(phi=0.25)=%.6f (target 0.125 +- 0.01: %s); phi_opt=%.5f (target 0.2507 +- 0.01: %s)",
                          l, lok ? "ok" : "miss", m.phi, pok ? "ok" : "miss")};
}

Outcome ac6(int threads) {
  const auto a = widest(run_preset("2a", threads));
  const auto b = widest(run_preset("2b", threads));
  const auto c = widest(run_preset("2c", threads));
  const bool vb = strictly_contains(b, a), vc = strictly_contains(c, a);
  return {vb && vc, "V=1,eta=1 " + show(a) + "; V=1000 " + show(b) + (vb ? " contains" : " does not contain") +
                        "; V=1,eta=0.03 " + show(c) + (vc ? " contains" : " does not contain")};
}

Outcome ac7() {
  bool ok = true;
  std::string s;
  for (double d : {1.0, 3.0, 5.0}) {
    const auto e = thermal::linear_entropy(1000.0, d, 100000, 1);
    ok = ok && e.value > 0.999 && e.std_error < 1e-4;
    s += fmt(" S(1000,%g)=%.6f+-%.1e", d, e.value, e.std_error);
    const auto z = thermal::linear_entropy(1.0, d, 100000, 1);
    ok = ok && std::abs(z.value) <= 3.0 * z.std_error + 1e-15;
    s += fmt(" S(1,%g)=%.1e+-%.1e", d, z.value, z.std_error);
  }
  return {ok, s.substr(1)};
}

double engine_correlation(const fock::OracleScenario& s) {
  auto op = s.family == Family::QubitEts ? coherent::ets_branch(s.alpha, s.beta) : coherent::alt_branch(s.alpha, s.d);
  op = coherent::apply_setting(op, s.setting_a, Mode::A, s.d);
  op = coherent::apply_setting(op, s.setting_b, Mode::B, s.d);
  return coherent::correlation(op, s.eta);
}

Outcome ac8() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_scenario = 0.0, worst_op = 0.0;
  const int scenarios = 100;
  for (int i = 0; i < scenarios; ++i) {
    // i % 4 cycles through both families and both setting types.
    fock::OracleScenario s;
    s.family = i % 2 ? Family::AltEts : Family::QubitEts;
    s.d = 0.6 + 0.6 * u(rng);
    s.alpha = {s.d + 0.3 * (u(rng) - 0.5), 0.3 * (u(rng) - 0.5)};
    s.beta = {s.d + 0.3 * (u(rng) - 0.5), 0.3 * (u(rng) - 0.5)};
    s.eta = 0.2 + 0.8 * u(rng);
    if ((i / 2) % 2 == 0) {
      s.setting_a = LocalSetting::bell(kPi * (u(rng) - 0.5));
      s.setting_b = LocalSetting::bell(kPi * (u(rng) - 0.5));
    } else {
      s.setting_a = LocalSetting::leggett({kPi * u(rng), kPi * (u(rng) - 0.5)});
      s.setting_b = LocalSetting::leggett({kPi * u(rng), kPi * (u(rng) - 0.5)});
    }
    worst_scenario = std::max(worst_scenario, std::abs(engine_correlation(s) - fock::oracle_correlation(s)));
  }
  // Each primitive on random superpositions of coherent pairs, against the
  // same primitive done with number-basis matrices.
  constexpr int dim = 20;
  const int states = 12;
  auto max_abs = [](const fock::Matrix& m) { return m.cwiseAbs().maxCoeff(); };
  for (int i = 0; i < states; ++i) {
    std::vector<std::array<Complex, 3>> psi;
    for (int k = 0; k < 3; ++k) {
      psi.push_back({Complex{2 * u(rng) - 1, 2 * u(rng) - 1}, 0.6 * Complex{2 * u(rng) - 1, 2 * u(rng) - 1},
                     0.6 * Complex{2 * u(rng) - 1, 2 * u(rng) - 1}});
    }
    std::vector<coherent::Dyad> dy;
    for (const auto& a : psi) {
      for (const auto& b : psi) dy.push_back({a[0] * std::conj(b[0]), a[1], a[2], b[1], b[2]});
    }
    const coherent::CoherentOperator st(dy);
    fock::Matrix v = fock::Matrix::Zero(dim * dim, 1);
    for (const auto& k : psi) v.col(0) += k[0] * testing::two_mode_vec(k[1], k[2], dim);
    const fock::Matrix rho = v * v.adjoint();
    auto rotated = [&](const fock::Matrix& w) {
      const fock::Matrix x = w * v;
      return fock::Matrix(x * x.adjoint());
    };
    const Complex z{u(rng) - 0.5, u(rng) - 0.5};
    const double t = u(rng), eta = 0.1 + 0.9 * u(rng);
    const Mode m = i % 2 ? Mode::A : Mode::B;
    using testing::to_fock;
    worst_op = std::max({worst_op,
                         max_abs(to_fock(coherent::displace(st, m, z), dim) -
                                 rotated(testing::on_mode(fock::fock_displace(z, dim), m, dim))),
                         max_abs(to_fock(coherent::kerr(st, m), dim) -
                                 rotated(testing::on_mode(fock::fock_kerr(dim), m, dim))),
                         max_abs(to_fock(coherent::beamsplit(st, t), dim) - rotated(fock::fock_beamsplit(t, dim))),
                         max_abs(to_fock(coherent::loss(st, m, eta), dim) - testing::loss_on_mode(rho, m, eta, dim))});
    const auto em = coherent::sign_moments(st, eta);
    const auto fm = testing::fock_sign_moments(rho, eta, dim);
    worst_op = std::max({worst_op, std::abs(em.trace - fm[0]), std::abs(em.sa - fm[1]), std::abs(em.sb - fm[2]),
                         std::abs(em.sab - fm[3]),
                         std::abs(coherent::correlation(st, eta) - testing::fock_correlation(rho, eta, dim))});
  }
  const bool ok = worst_scenario <= 1e-8 && worst_op <= 1e-8;
  return {ok, fmt("%d scenarios max|dC|=%.2e; %d states x {displace, kerr, beamsplit, loss, sign, correlation} "
                  "max err=%.2e; tol 1e-8",
                  scenarios, worst_scenario, states, worst_op)};
}

Outcome ac9() {
  double worst = 0.0;
  for (double eta : {0.05, 0.5, 1.0}) {
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        const double ta = -kPi / 2 + i * kPi / 4, tb = -kPi / 2 + j * kPi / 4;
        fock::OracleScenario s;
        s.eta = eta;
        s.setting_a = LocalSetting::bell(ta);
        s.setting_b = LocalSetting::bell(tb);
        worst = std::max(worst, std::abs(analytic::closed_form_correlation(ta, tb, {1.0, 1.0, eta}) -
                                         engine_correlation(s)));
      }
    }
  }
  return {worst <= 1e-6, fmt("closed form vs engine on 5x5x3 grid at V=1, d=1: max|dC|=%.2e (tol 1e-6)", worst)};
}

Outcome ac10() {
  std::ostringstream log;
  const auto checks = cli::run_validation("quick", log);
  int failed = 0;
  for (const auto& c : checks) failed += !c.pass;
  return {failed == 0, fmt("validate quick: %d/%zu checks pass", int(checks.size()) - failed, checks.size())};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria AC1..AC10"};
  std::string only;
  bool reduced = false;
  int threads = cli::default_threads();
  app.add_option("--only", only, "run a single criterion, e.g. AC5");
  app.add_flag("--reduced", reduced, "smaller AC3 grid");
  app.add_option("--threads", threads)->check(CLI::Range(1, 1024));
  CLI11_PARSE(app, argc, argv);

  struct Criterion {
    const char* id;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {"AC1", 60, [] { return ac1(); }},
      {"AC2", 120, [&] { return ac2(threads); }},
      {"AC3", 1800, [&] { return ac3(threads, reduced); }},
      {"AC4", 600, [&] { return ac4(threads); }},
      {"AC5", 600, [] { return ac5(); }},
      {"AC6", 1200, [&] { return ac6(threads); }},
      {"AC7", 300, [] { return ac7(); }},
      {"AC8", 600, [] { return ac8(); }},
      {"AC9", 120, [] { return ac9(); }},
      {"AC10", 120, [] { return ac10(); }},
  };
  int failures = 0;
  for (const auto& c : all) {
    if (!only.empty() && only != c.id) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("%s %s  %s; %.1fs (budget %.0fs)%s\n", pass ? "PASS" : "FAIL", c.id, o.detail.c_str(), secs,
                c.budget_s, in_time ? "" : " over budget");
    std::fflush(stdout);
  }
  return failures;
}
