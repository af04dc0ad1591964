#include "cvbell/coherent/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "cvbell/numerics/special.hpp"

namespace cvbell::coherent {
namespace {

constexpr double kSqrtHalf = 0.70710678118654752440;
const Complex kI{0.0, 1.0};

// e^{-i pi/4} / sqrt(2)
const Complex kKerrAmp = std::polar(kSqrtHalf, -std::numbers::pi / 4.0);

void check_labels(const Dyad& d, double cap) {
  for (Complex g : {d.ket_a, d.ket_b, d.bra_a, d.bra_b}) {
    if (!(std::abs(g) <= cap)) {
      throw std::domain_error("coherent label magnitude exceeds cap");
    }
  }
  if (!std::isfinite(d.coeff.real()) || !std::isfinite(d.coeff.imag())) {
    throw std::domain_error("non-finite dyad coefficient");
  }
}

// D(zeta)|g> = phase * |g + zeta>
Complex displacement_phase(Complex zeta, Complex g) {
  return std::exp(0.5 * (zeta * std::conj(g) - std::conj(zeta) * g));
}

Complex& ket(Dyad& d, Mode m) { return m == Mode::A ? d.ket_a : d.ket_b; }
Complex& bra(Dyad& d, Mode m) { return m == Mode::A ? d.bra_a : d.bra_b; }

using Key = std::array<long long, 8>;

Key label_key(const Dyad& d) {
  auto q = [](double x) { return std::llround(x * 1e12); };
  return {q(d.ket_a.real()), q(d.ket_a.imag()), q(d.ket_b.real()), q(d.ket_b.imag()),
          q(d.bra_a.real()), q(d.bra_a.imag()), q(d.bra_b.real()), q(d.bra_b.imag())};
}

Key adjoint_key(const Dyad& d) {
  Dyad a{std::conj(d.coeff), d.bra_a, d.bra_b, d.ket_a, d.ket_b};
  return label_key(a);
}

std::vector<Dyad> merged(const std::vector<Dyad>& in) {
  std::map<Key, std::size_t> index;
  std::vector<Dyad> out;
  out.reserve(in.size());
  for (const Dyad& d : in) {
    auto [it, inserted] = index.try_emplace(label_key(d), out.size());
    if (inserted) {
      out.push_back(d);
    } else {
      out[it->second].coeff += d.coeff;
    }
  }
  return out;
}

}  // namespace

CoherentOperator::CoherentOperator(std::vector<Dyad> dyads, double label_cap)
    : dyads_(std::move(dyads)), label_cap_(label_cap) {
  for (const Dyad& d : dyads_) check_labels(d, label_cap_);
}

Complex CoherentOperator::trace() const {
  Complex t = 0.0;
  for (const Dyad& d : dyads_) t += d.coeff * overlap(d.bra_a, d.ket_a) * overlap(d.bra_b, d.ket_b);
  return t;
}

double CoherentOperator::coefficient_mass() const {
  double m = 0.0;
  for (const Dyad& d : dyads_) m += std::abs(d.coeff);
  return m;
}

Complex overlap(Complex bra, Complex ket) {
  return std::exp(std::conj(bra) * ket - 0.5 * std::norm(ket) - 0.5 * std::norm(bra));
}

Complex sign_element(Complex bra, Complex ket) {
  return overlap(bra, ket) * numerics::erf((ket + std::conj(bra)) * kSqrtHalf);
}

CoherentOperator ets_branch(Complex alpha, Complex beta) {
  std::vector<Dyad> dyads;
  for (double s : {1.0, -1.0}) {
    for (double t : {1.0, -1.0}) dyads.push_back({0.5, s * alpha, s * beta, t * alpha, t * beta});
  }
  return CoherentOperator(std::move(dyads));
}

CoherentOperator alt_branch_unfixed(Complex alpha) {
  CoherentOperator vac(std::vector<Dyad>{{1.0, alpha, 0.0, alpha, 0.0}});
  return beamsplit(kerr(vac, Mode::A), kSqrtHalf);
}

CoherentOperator alt_branch_displaced(Complex alpha, Complex zeta) {
  return displace(alt_branch_unfixed(alpha), Mode::A, zeta);
}

CoherentOperator alt_branch(Complex alpha, double d) {
  if (!(d > 0.0)) throw std::invalid_argument("alt_branch: d must be positive");
  return alt_branch_displaced(alpha, Complex{0.0, std::numbers::pi / (8.0 * d)});
}

CoherentOperator displace(const CoherentOperator& op, Mode mode, Complex zeta) {
  std::vector<Dyad> out = op.dyads();
  for (Dyad& d : out) {
    Complex& k = ket(d, mode);
    Complex& b = bra(d, mode);
    d.coeff *= displacement_phase(zeta, k) * std::conj(displacement_phase(zeta, b));
    k += zeta;
    b += zeta;
  }
  return CoherentOperator(std::move(out), op.label_cap());
}

CoherentOperator kerr(const CoherentOperator& op, Mode mode) {
  const std::array<Complex, 2> amp{kKerrAmp, kI * kKerrAmp};
  const std::array<double, 2> sign{1.0, -1.0};
  std::vector<Dyad> out;
  out.reserve(op.size() * 4);
  for (const Dyad& d : op.dyads()) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        Dyad n = d;
        n.coeff *= amp[i] * std::conj(amp[j]);
        ket(n, mode) *= sign[i];
        bra(n, mode) *= sign[j];
        out.push_back(n);
      }
    }
  }
  return CoherentOperator(std::move(out), op.label_cap());
}

CoherentOperator beamsplit(const CoherentOperator& op, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("beamsplit: transmission amplitude must lie in [0, 1]");
  const double r = std::sqrt(1.0 - t * t);
  std::vector<Dyad> out = op.dyads();
  for (Dyad& d : out) {
    const Complex ka = d.ket_a, kb = d.ket_b, ba = d.bra_a, bb = d.bra_b;
    d.ket_a = t * ka + r * kb;
    d.ket_b = -r * ka + t * kb;
    d.bra_a = t * ba + r * bb;
    d.bra_b = -r * ba + t * bb;
  }
  return CoherentOperator(std::move(out), op.label_cap());
}

CoherentOperator loss(const CoherentOperator& op, Mode mode, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("loss: eta must lie in (0, 1]");
  const double amp = std::sqrt(eta);
  std::vector<Dyad> out = op.dyads();
  for (Dyad& d : out) {
    Complex& k = ket(d, mode);
    Complex& b = bra(d, mode);
    d.coeff *= std::exp((1.0 - eta) * (k * std::conj(b) - 0.5 * (std::norm(k) + std::norm(b))));
    k *= amp;
    b *= amp;
  }
  return CoherentOperator(std::move(out), op.label_cap());
}

namespace {

Complex log_overlap(Complex bra, Complex ket) { return std::conj(bra) * ket - 0.5 * std::norm(ket) - 0.5 * std::norm(bra); }

}  // namespace

SignMoments sign_moments(const CoherentOperator& op, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("loss: eta must lie in (0, 1]");
  // Loss followed by sign(x) on one mode: <b| L^+(S) |k> = <b|k> erf(sqrt(eta) (k + b^*) / sqrt(2)).
  // Exponents are combined before exponentiating so that tiny overlaps meet
  // huge erf values without overflow.
  const double r = std::sqrt(eta) * kSqrtHalf;
  SignMoments m;
  for (const Dyad& d : op.dyads()) {
    const Complex la = log_overlap(d.bra_a, d.ket_a);
    const Complex lb = log_overlap(d.bra_b, d.ket_b);
    const numerics::ScaledErf ea = numerics::erf_scaled(r * (d.ket_a + std::conj(d.bra_a)));
    const numerics::ScaledErf eb = numerics::erf_scaled(r * (d.ket_b + std::conj(d.bra_b)));
    m.trace += d.coeff * std::exp(la + lb);
    m.sa += d.coeff * std::exp(la + lb + ea.log_scale) * ea.mantissa;
    m.sb += d.coeff * std::exp(la + lb + eb.log_scale) * eb.mantissa;
    m.sab += d.coeff * std::exp(la + lb + ea.log_scale + eb.log_scale) * (ea.mantissa * eb.mantissa);
  }
  return m;
}

namespace {

SignMoments checked_moments(const CoherentOperator& op, double eta) {
  SignMoments m = sign_moments(op, eta);
  if (std::abs(m.trace) <= 1e-300) throw std::domain_error("correlation: operator has zero trace");
  return m;
}

}  // namespace

double correlation(const CoherentOperator& op, double eta) {
  const SignMoments m = checked_moments(op, eta);
  return (m.sab / m.trace).real();
}

JointProbabilities joint_probs(const CoherentOperator& op, double eta) {
  const SignMoments m = checked_moments(op, eta);
  const double a = (m.sa / m.trace).real();
  const double b = (m.sb / m.trace).real();
  const double ab = (m.sab / m.trace).real();
  return {0.25 * (1 + a + b + ab), 0.25 * (1 + a - b - ab), 0.25 * (1 - a + b - ab), 0.25 * (1 - a - b + ab)};
}

CoherentOperator apply_bell_setting(const CoherentOperator& op, double theta, Mode mode, double d) {
  if (!(d > 0.0)) throw std::invalid_argument("apply_bell_setting: d must be positive");
  return kerr(displace(kerr(op, mode), mode, Complex{0.0, theta / (2.0 * d)}), mode);
}

CoherentOperator apply_leggett_setting(const CoherentOperator& op, const LeggettSetting& setting, Mode mode,
                                       double d) {
  if (!(d > 0.0)) throw std::invalid_argument("apply_leggett_setting: d must be positive");
  const Complex outer{0.0, setting.phi / (4.0 * d)};
  const Complex inner{0.0, setting.theta / (4.0 * d)};
  CoherentOperator r = displace(op, mode, outer);
  r = kerr(r, mode);
  r = displace(r, mode, inner);
  r = kerr(r, mode);
  return displace(r, mode, -outer);
}

CoherentOperator apply_setting(const CoherentOperator& op, const LocalSetting& setting, Mode mode, double d) {
  if (setting.kind == LocalSetting::Kind::Bell) return apply_bell_setting(op, setting.theta, mode, d);
  return apply_leggett_setting(op, {setting.theta, setting.phi}, mode, d);
}

QubitMap projected_setting(const LocalSetting& setting, double d) {
  if (!(d > 0.0)) throw std::invalid_argument("projected_setting: d must be positive");
  const double s[2] = {d, -d};
  // U|s_j><s_l|U^+ sandwiched between <s_i| and |s_k> gives M_ij conj(M_kl).
  auto product = [&](int i, int j, int k, int l) {
    const CoherentOperator out =
        apply_setting(CoherentOperator({Dyad{1.0, s[j], 0.0, s[l], 0.0}}), setting, Mode::A, d);
    Complex acc = 0.0;
    for (const Dyad& y : out.dyads()) {
      acc += y.coeff * overlap(s[i], y.ket_a) * overlap(y.bra_a, s[k]) * overlap(y.bra_b, y.ket_b);
    }
    return acc;
  };
  int ri = 0, rj = 0;
  double best = -1.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double p = product(i, j, i, j).real();
      if (p > best) {
        best = p;
        ri = i;
        rj = j;
      }
    }
  }
  const double ref = std::sqrt(best);
  QubitMap m;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) m[2 * i + j] = product(i, j, ri, rj) / ref;
  }
  return m;
}

QubitMap ideal_rotation(double theta, double phi) {
  const double sn = std::sin(0.5 * theta), cs = std::cos(0.5 * theta);
  const Complex e = std::polar(1.0, phi);
  return {sn, std::conj(e) * cs, e * cs, -sn};
}

double map_fidelity(const QubitMap& m, const QubitMap& r) {
  Complex overlap_rm = 0.0;
  double norm = 0.0;
  for (int k = 0; k < 4; ++k) {
    overlap_rm += std::conj(r[k]) * m[k];
    norm += std::norm(m[k]);
  }
  return std::norm(overlap_rm) / (2.0 * norm);
}

CoherentOperator prune(const CoherentOperator& op, double tol) {
  if (!(tol >= 0.0)) throw std::invalid_argument("prune: tolerance must be non-negative");
  std::vector<Dyad> dyads = merged(op.dyads());
  std::erase_if(dyads, [](const Dyad& d) { return d.coeff == Complex{0.0, 0.0}; });
  if (tol == 0.0) return CoherentOperator(std::move(dyads), op.label_cap());

  // Drop the smallest dyads, together with their adjoint partners, while the
  // dropped coefficient mass stays within tol * |trace|.
  const double budget = tol * std::abs(CoherentOperator(dyads, op.label_cap()).trace());
  std::map<Key, std::size_t> index;
  for (std::size_t i = 0; i < dyads.size(); ++i) index.emplace(label_key(dyads[i]), i);
  std::vector<std::size_t> order(dyads.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(dyads[a].coeff) < std::abs(dyads[b].coeff); });
  std::vector<bool> drop(dyads.size(), false);
  double spent = 0.0;
  for (std::size_t i : order) {
    if (drop[i]) continue;
    const auto partner = index.find(adjoint_key(dyads[i]));
    const bool paired = partner != index.end() && partner->second != i;
    const double cost = std::abs(dyads[i].coeff) * (paired ? 2.0 : 1.0);
    if (spent + cost > budget) break;
    spent += cost;
    drop[i] = true;
    if (paired) drop[partner->second] = true;
  }
  std::vector<Dyad> kept;
  kept.reserve(dyads.size());
  for (std::size_t i = 0; i < dyads.size(); ++i) {
    if (!drop[i]) kept.push_back(dyads[i]);
  }
  return CoherentOperator(std::move(kept), op.label_cap());
}

CoherentOperator adjoint(const CoherentOperator& op) {
  std::vector<Dyad> out;
  out.reserve(op.size());
  for (const Dyad& d : op.dyads()) out.push_back({std::conj(d.coeff), d.bra_a, d.bra_b, d.ket_a, d.ket_b});
  return CoherentOperator(std::move(out), op.label_cap());
}

bool is_hermitian(const CoherentOperator& op, double tol) {
  std::map<Key, Complex> diff;
  for (const Dyad& d : merged(op.dyads())) diff[label_key(d)] += d.coeff;
  for (const Dyad& d : merged(adjoint(op).dyads())) diff[label_key(d)] -= d.coeff;
  const double scale = std::max(1.0, op.coefficient_mass());
  for (const auto& [key, c] : diff) {
    if (std::abs(c) > tol * scale) return false;
  }
  return true;
}

}  // namespace cvbell::coherent
