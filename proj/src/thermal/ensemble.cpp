#include "cvbell/thermal/ensemble.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cvbell/coherent/engine.hpp"
#include "cvbell/numerics/quadrature.hpp"
#include "cvbell/thermal/affine.hpp"

namespace cvbell::thermal {
namespace {

using Kernel = std::array<Complex, 4>;  // (s, s') = (+,+), (+,-), (-,+), (-,-)
constexpr std::array<std::array<double, 2>, 4> kSignPairs{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double unit(std::uint64_t& state) { return (splitmix64(state) >> 11) * 0x1.0p-53; }

// Two independent standard normals by Box-Muller.
std::array<double, 2> normal_pair(std::uint64_t& state) {
  const double u1 = 1.0 - unit(state);
  const double u2 = unit(state);
  const double r = std::sqrt(-2.0 * std::log(u1));
  return {r * std::cos(2.0 * std::numbers::pi * u2), r * std::sin(2.0 * std::numbers::pi * u2)};
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed ^ (index * 0xD1B54A32D192ED03ULL);
  return splitmix64(s);
}

ThermalVariable variable(const EtsParams& p) { return {p.d, 0.25 * (p.V - 1.0)}; }

AffineState single_mode(double s) { return {AffineKet{1.0, 0.0, 0.0, {s, 0.0}, {0.0, 0.0}}}; }

AffineState alt_affine(double d) {
  AffineState st = single_mode(1.0);
  st = affine_kerr(st, Mode::A);
  st = affine_beamsplit(st, std::sqrt(0.5));
  return affine_displace(st, Mode::A, Complex{0.0, std::numbers::pi / (8.0 * d)});
}

// Per-mode factors of the qubit-heralded state: the branch is
// 1/2 sum_{s,s'} |s a, s b><s' a, s' b|, so Tr[rho X (x) Y] = 1/2 sum K_X K_Y.
Kernel moment_kernel(const LocalSetting* setting, const EtsParams& p) {
  Kernel k{};
  for (int i = 0; i < 4; ++i) {
    AffineState ket = single_mode(kSignPairs[i][0]);
    AffineState bra = single_mode(kSignPairs[i][1]);
    if (setting) {
      ket = affine_setting(ket, *setting, Mode::A, p.d);
      bra = affine_setting(bra, *setting, Mode::A, p.d);
    }
    k[i] = affine_expectation(bra, ket, setting ? Observable::SignA : Observable::Identity, p.eta, variable(p));
  }
  return k;
}

Kernel grid_kernel(const LocalSetting* setting, const EtsParams& p, const PfuncGrid& grid) {
  Kernel k{};
  for (const PfuncSample& smp : grid.samples) {
    for (int i = 0; i < 4; ++i) {
      const Complex ket = kSignPairs[i][0] * smp.alpha;
      const Complex bra = kSignPairs[i][1] * smp.alpha;
      coherent::CoherentOperator op(std::vector<coherent::Dyad>{{1.0, ket, 0.0, bra, 0.0}});
      if (!setting) {
        k[i] += smp.weight * op.trace();
        continue;
      }
      op = coherent::apply_setting(op, *setting, Mode::A, p.d);
      k[i] += smp.weight * coherent::sign_moments(op, p.eta).sa;
    }
  }
  return k;
}

Complex contract(const Kernel& a, const Kernel& b) {
  Complex c = 0.0;
  for (int i = 0; i < 4; ++i) c += 0.5 * a[i] * b[i];
  return c;
}

double checked_real(Complex c) {
  if (!std::isfinite(c.real()) || std::abs(c.imag()) > 1e-6 * std::max(1.0, std::abs(c.real()))) {
    throw std::domain_error("ensemble: complex or non-finite correlation");
  }
  return c.real();
}

// B from four correlations C(a,b) + C(a',b) + C(a,b') - C(a',b').
double chsh(double c11, double c21, double c12, double c22) { return c11 + c21 + c12 - c22; }

struct PointEvaluator {
  Family family;
  EtsParams p;
  const PfuncGrid* grid;  // null for the Moment scheme

  Kernel kernel(const LocalSetting* s) const { return grid ? grid_kernel(s, p, *grid) : moment_kernel(s, p); }

  Complex alt_trace() const {
    if (!grid) {
      const AffineState st = alt_affine(p.d);
      return affine_expectation(st, st, Observable::Identity, p.eta, variable(p));
    }
    Complex t = 0.0;
    for (const PfuncSample& smp : grid->samples) t += smp.weight * coherent::alt_branch(smp.alpha, p.d).trace();
    return t;
  }

  Complex alt_numerator(const LocalSetting& a, const LocalSetting& b) const {
    if (!grid) {
      AffineState st = affine_setting(affine_setting(alt_affine(p.d), a, Mode::A, p.d), b, Mode::B, p.d);
      return affine_expectation(st, st, Observable::SignAB, p.eta, variable(p));
    }
    Complex n = 0.0;
    for (const PfuncSample& smp : grid->samples) {
      coherent::CoherentOperator op = coherent::alt_branch(smp.alpha, p.d);
      op = coherent::apply_setting(coherent::apply_setting(op, a, Mode::A, p.d), b, Mode::B, p.d);
      n += smp.weight * coherent::sign_moments(op, p.eta).sab;
    }
    return n;
  }

  std::vector<double> correlations(const std::vector<SettingPair>& pairs) const {
    std::vector<double> out;
    out.reserve(pairs.size());
    if (family == Family::QubitEts) {
      const Kernel j = kernel(nullptr);
      const Complex n = contract(j, j);
      std::vector<std::pair<LocalSetting, Kernel>> cache;
      auto lookup = [&](const LocalSetting& s) -> const Kernel& {
        for (const auto& [key, k] : cache) {
          if (key.kind == s.kind && key.theta == s.theta && key.phi == s.phi) return k;
        }
        cache.emplace_back(s, kernel(&s));
        return cache.back().second;
      };
      for (const SettingPair& pr : pairs) {
        const Kernel ka = lookup(pr.a);
        const Kernel& kb = lookup(pr.b);
        out.push_back(checked_real(contract(ka, kb) / n));
      }
      return out;
    }
    const Complex t = alt_trace();
    for (const SettingPair& pr : pairs) out.push_back(checked_real(alt_numerator(pr.a, pr.b) / t));
    return out;
  }

  double bell(const ChshAngles& g) const {
    const LocalSetting a1 = LocalSetting::bell(g.theta_a), a2 = LocalSetting::bell(g.theta_a2);
    const LocalSetting b1 = LocalSetting::bell(g.theta_b), b2 = LocalSetting::bell(g.theta_b2);
    const auto c = correlations({{a1, b1}, {a2, b1}, {a1, b2}, {a2, b2}});
    return chsh(c[0], c[1], c[2], c[3]);
  }
};

template <class F>
EnsembleValue evaluate(const EtsParams& params, const EnsembleOptions& opt, Family family, F&& f) {
  params.validate();
  EnsembleValue r;
  if (opt.scheme == Scheme::Moment) {
    r.value = f(PointEvaluator{family, params, nullptr});
    return r;
  }
  if (params.V == 1.0) {
    const PfuncGrid g = pfunc_grid(params.V, params.d, 1);
    r.value = f(PointEvaluator{family, params, &g});
    r.order_used = 1;
    return r;
  }
  int order = opt.order;
  while (true) {
    const PfuncGrid g1 = pfunc_grid(params.V, params.d, order);
    r.value = f(PointEvaluator{family, params, &g1});
    r.order_used = order;
    if (!opt.check_convergence) return r;
    const int doubled = std::min(2 * order, numerics::kMaxHermiteOrder);
    const PfuncGrid g2 = pfunc_grid(params.V, params.d, doubled);
    const double v2 = f(PointEvaluator{family, params, &g2});
    r.order_change = std::abs(v2 - r.value);
    r.converged = r.order_change <= opt.convergence_tolerance;
    if (r.converged || order >= 20) return r;
    order = 20;
  }
}

}  // namespace

double PfuncGrid::total_weight() const {
  double w = 0.0;
  for (const PfuncSample& s : samples) w += s.weight;
  return w;
}

PfuncGrid pfunc_grid(double V, double d, int order) {
  if (!std::isfinite(V) || V < 1.0) throw std::invalid_argument("pfunc_grid: V must be >= 1");
  if (!std::isfinite(d)) throw std::invalid_argument("pfunc_grid: d must be finite");
  PfuncGrid g;
  g.V = V;
  g.d = d;
  g.kind = PfuncGrid::Kind::Quadrature;
  if (V == 1.0) {
    g.order = 1;
    g.samples.push_back({Complex{d, 0.0}, 1.0});
    return g;
  }
  const numerics::QuadratureRule rule = numerics::gauss_hermite(order);
  g.order = order;
  const double sigma = std::sqrt(0.25 * (V - 1.0));
  const double spread = std::sqrt(2.0) * sigma;
  double total = 0.0;
  g.samples.reserve(static_cast<std::size_t>(order) * order);
  for (int i = 0; i < order; ++i) {
    for (int j = 0; j < order; ++j) {
      const double w = rule.weights[i] * rule.weights[j];
      g.samples.push_back({Complex{d + spread * rule.nodes[i], spread * rule.nodes[j]}, w});
      total += w;
    }
  }
  for (PfuncSample& s : g.samples) s.weight /= total;
  return g;
}

PfuncGrid pfunc_samples(double V, double d, int count, std::uint64_t seed) {
  if (!std::isfinite(V) || V < 1.0) throw std::invalid_argument("pfunc_samples: V must be >= 1");
  if (count < 1) throw std::invalid_argument("pfunc_samples: count must be positive");
  PfuncGrid g;
  g.V = V;
  g.d = d;
  g.kind = PfuncGrid::Kind::MonteCarlo;
  g.seed = seed;
  g.order = count;
  const double sigma = std::sqrt(0.25 * (V - 1.0));
  g.samples.reserve(count);
  for (int i = 0; i < count; ++i) {
    std::uint64_t state = stream_seed(seed, static_cast<std::uint64_t>(i));
    const auto z = normal_pair(state);
    g.samples.push_back({Complex{d + sigma * z[0], sigma * z[1]}, 1.0 / count});
  }
  return g;
}

EnsembleValue ensemble_correlation(Family family, const LocalSetting& setting_a, const LocalSetting& setting_b,
                                   const EtsParams& params, const EnsembleOptions& options) {
  return evaluate(params, options, family,
                  [&](const PointEvaluator& e) { return e.correlations({{setting_a, setting_b}})[0]; });
}

std::vector<double> ensemble_correlations(Family family, const std::vector<SettingPair>& pairs,
                                          const EtsParams& params, const EnsembleOptions& options, bool* converged) {
  std::vector<double> values;
  const EnsembleValue r = evaluate(params, options, family, [&](const PointEvaluator& e) {
    values = e.correlations(pairs);
    double acc = 0.0;
    for (double v : values) acc += std::abs(v);
    return acc;
  });
  if (converged) *converged = r.converged;
  // The convergence probe re-runs the lambda at 2 * order; rerun at the order reported.
  if (options.scheme == Scheme::Quadrature && params.V != 1.0 && options.check_convergence) {
    const PfuncGrid g = pfunc_grid(params.V, params.d, r.order_used);
    values = PointEvaluator{family, params, &g}.correlations(pairs);
  }
  return values;
}

EnsembleValue ensemble_bell(Family family, const ChshAngles& angles, const EtsParams& params,
                            const EnsembleOptions& options) {
  return evaluate(params, options, family, [&](const PointEvaluator& e) { return e.bell(angles); });
}

double ensemble_trace(Family family, const EtsParams& params) {
  params.validate();
  const PointEvaluator e{family, params, nullptr};
  if (family == Family::QubitEts) {
    const Kernel j = e.kernel(nullptr);
    return checked_real(contract(j, j));
  }
  return checked_real(e.alt_trace());
}

EntropyEstimate linear_entropy(double V, double d, int samples, std::uint64_t seed) {
  const EtsParams p{V, d, 1.0};
  p.validate();
  if (samples < 10000) throw std::invalid_argument("linear_entropy: at least 10^4 samples required");
  const double norm = 1.0 + std::exp(-4.0 * d * d / V) / (V * V);
  const double sigma = std::sqrt(0.25 * (V - 1.0));
  // psi = (|a, b> + |-a, -b>) / sqrt(2); Tr[b b'] = |<psi|psi'>|^2.
  auto overlap = [](Complex x, Complex y) {
    return std::exp(std::conj(x) * y - 0.5 * std::norm(x) - 0.5 * std::norm(y));
  };
  // Compensated sums: 10^5 equal terms would otherwise drift by ~n eps.
  struct Neumaier {
    double s = 0.0, c = 0.0;
    void add(double x) {
      const double t = s + x;
      c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
      s = t;
    }
    double value() const { return s + c; }
  } sum, sum2;
  for (int i = 0; i < samples; ++i) {
    std::uint64_t state = stream_seed(seed, static_cast<std::uint64_t>(i));
    const auto z1 = normal_pair(state);
    const auto z2 = normal_pair(state);
    const auto z3 = normal_pair(state);
    const auto z4 = normal_pair(state);
    const Complex a{d + sigma * z1[0], sigma * z1[1]}, b{d + sigma * z2[0], sigma * z2[1]};
    const Complex a2{d + sigma * z3[0], sigma * z3[1]}, b2{d + sigma * z4[0], sigma * z4[1]};
    Complex ov = 0.0;
    for (double s : {1.0, -1.0}) {
      for (double t : {1.0, -1.0}) ov += 0.5 * overlap(s * a, t * a2) * overlap(s * b, t * b2);
    }
    const double x = std::norm(ov);
    sum.add(x);
    sum2.add(x * x);
  }
  const double mean = sum.value() / samples;
  const double var = std::max(0.0, sum2.value() / samples - mean * mean);
  EntropyEstimate e;
  e.value = 1.0 - mean / (norm * norm);
  e.std_error = std::sqrt(var / samples) / (norm * norm);
  e.samples = samples;
  e.seed = seed;
  return e;
}

}  // namespace cvbell::thermal
