#include "cvbell/inequalities/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cvbell/analytic/chsh.hpp"

namespace cvbell::inequalities {
namespace {

constexpr double kPi = std::numbers::pi;

ChshAngles unpack(std::span<const double> x) { return {x[0], x[1], x[2], x[3]}; }

LocalSetting bob(const LeggettSetting& s, bool mirror) {
  return LocalSetting::leggett({s.theta, mirror ? -s.phi : s.phi});
}

}  // namespace

double bell_value(const ChshAngles& angles, const EtsParams& params, const Backend& backend) {
  if (backend.kind == Backend::Kind::Analytic) {
    if (backend.family != Family::QubitEts) throw std::invalid_argument("analytic backend covers the qubit ETS only");
    return analytic::bell_b(angles, params);
  }
  return thermal::ensemble_bell(backend.family, angles, params, backend.ensemble).value;
}

numerics::OptimizerConfig default_chsh_config() {
  numerics::OptimizerConfig c;
  c.bounds.assign(4, {-kPi, kPi});
  return c;
}

ChshMax chsh_max(const EtsParams& params, const Backend& backend, const numerics::OptimizerConfig& opt,
                 const std::vector<ChshAngles>& warm_starts) {
  params.validate();
  opt.validate();
  if (opt.bounds.size() != 4) throw std::invalid_argument("chsh_max: four angle bounds required");
  const numerics::Objective f = [&](std::span<const double> x) {
    return -std::abs(bell_value(unpack(x), params, backend));
  };
  std::vector<std::vector<double>> starts;
  for (const ChshAngles& a : warm_starts) starts.push_back({a.theta_a, a.theta_b, a.theta_a2, a.theta_b2});
  const numerics::OptimizeResult r = numerics::minimize(f, opt, starts);
  return {-r.min, unpack(r.argmin), r.converged, r.evaluations};
}

LeggettSuite leggett_suite(double phi) {
  if (!std::isfinite(phi)) throw std::invalid_argument("leggett_suite: phi must be finite");
  LeggettSuite s;
  s.phi = phi;
  s.a1 = {kPi / 2, 0.0};
  s.a2 = {kPi / 2, kPi / 2};
  s.a3 = {0.0, 0.0};
  s.b1 = {kPi / 2, phi};
  s.b2 = {kPi / 2, kPi / 2 + phi};
  s.b4 = {phi, kPi / 2};
  s.b3 = {kPi / 2 + phi, kPi / 2};
  s.b5 = s.a1;
  s.b6 = s.a2;
  s.b7 = s.a3;
  return s;
}

double leggett_L(const EtsParams& params, double phi, const LeggettOptions& o) {
  const LeggettSuite s = leggett_suite(phi);
  const bool m = o.mirror_bob_azimuth;
  auto A = [](const LeggettSetting& x) { return LocalSetting::leggett(x); };
  const std::vector<thermal::SettingPair> pairs{
      {A(s.a1), bob(s.b1, m)}, {A(s.a2), bob(s.b2, m)}, {A(s.a1), bob(s.b5, m)}, {A(s.a2), bob(s.b6, m)},
      {A(s.a2), bob(s.b3, m)}, {A(s.a3), bob(s.b4, m)}, {A(s.a3), bob(s.b7, m)},
  };
  if (o.backend.kind != Backend::Kind::Ensemble) {
    throw std::invalid_argument("leggett_L: correlations come from the ensemble backend");
  }
  const std::vector<double> c =
      thermal::ensemble_correlations(o.backend.family, pairs, params, o.backend.ensemble);
  return std::abs(c[0] + c[1] + c[2] + c[3]) + std::abs(c[4] + c[5] + c[3] + c[6]);
}

double leggett_script(const EtsParams& params, double phi, const LeggettOptions& o) {
  return leggett_L(params, phi, o) - 8.0 + o.sine_coefficient * std::abs(std::sin(0.5 * phi));
}

LeggettMax leggett_script_max(const EtsParams& params, bool optimize, const LeggettOptions& o,
                              const numerics::OptimizerConfig* opt) {
  params.validate();
  if (!optimize) return {leggett_script(params, kLeggettPhi, o), kLeggettPhi, true};
  numerics::OptimizerConfig c;
  if (opt) c = *opt;
  c.bounds = {{1e-6, kPi / 2}};
  if (!opt) {
    c.restarts = 3;
    c.tolerance = 1e-6;
  }
  const numerics::Objective f = [&](std::span<const double> x) { return -leggett_script(params, x[0], o); };
  const numerics::OptimizeResult r = numerics::minimize(f, c, {{kLeggettPhi}});
  return {-r.min, r.argmin[0], r.converged};
}

std::vector<Window> coexistence_windows(const std::vector<double>& d, const std::vector<double>& b_max,
                                        const std::vector<double>& l_script) {
  if (d.size() != b_max.size() || d.size() != l_script.size()) {
    throw std::invalid_argument("coexistence_windows: length mismatch");
  }
  std::vector<Window> out;
  bool open = false;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const bool in = b_max[i] > 2.0 && l_script[i] <= 0.0;
    if (in && !open) out.push_back({d[i], d[i]});
    if (in) out.back().hi = d[i];
    open = in;
  }
  return out;
}

std::optional<Window> window_containing(const std::vector<Window>& windows, double d) {
  for (const Window& w : windows) {
    if (w.lo <= d && d <= w.hi) return w;
  }
  return std::nullopt;
}

}  // namespace cvbell::inequalities
