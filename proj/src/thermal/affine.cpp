#include "cvbell/thermal/affine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

#include "cvbell/analytic/gaussian_moments.hpp"
#include "cvbell/numerics/quadrature.hpp"
#include "cvbell/numerics/special.hpp"

namespace cvbell::thermal {
namespace {

const Complex kI{0.0, 1.0};
const Complex kKerrAmp = std::polar(std::sqrt(0.5), -std::numbers::pi / 4.0);

int idx(Mode m) { return m == Mode::A ? 0 : 1; }

enum class Axis { None, X, Y };

struct ErfFactor {
  Axis axis = Axis::None;
  Complex slope;
  Complex offset;
};

ErfFactor lossy_sign(double p, double pp, Complex u, Complex v, double eta) {
  const double r = std::sqrt(0.5 * eta);
  const Complex offset = r * (u + std::conj(v));
  const double sx = r * (p + pp);
  const double sy = r * (p - pp);
  const bool on_x = std::abs(sx) > 1e-15;
  const bool on_y = std::abs(sy) > 1e-15;
  if (on_x && on_y) throw std::domain_error("affine_expectation: erf couples both quadratures");
  if (on_x) return {Axis::X, sx, offset};
  if (on_y) return {Axis::Y, kI * sy, offset};
  return {Axis::None, 0.0, offset};
}

struct Erf2Job {
  double quad;
  Complex lin;
  ErfFactor e1, e2;
  Complex log_prefactor;
};

struct Window {
  double lo, hi, h;
};

Window job_window(const Erf2Job& j, double mean, double var) {
  const double growth = j.e1.slope.imag() * j.e1.slope.imag() + j.e2.slope.imag() * j.e2.slope.imag();
  const double precision = 1.0 / var - 2.0 * j.quad - 2.0 * growth;
  if (!(precision > 0.0)) throw std::domain_error("expect_exp_erf2: divergent moment");
  const double sigma = 1.0 / std::sqrt(precision);
  const double center = (mean / var + j.lin.real() +
                         2.0 * (j.e1.slope.imag() * j.e1.offset.imag() + j.e2.slope.imag() * j.e2.offset.imag())) /
                        precision;
  const double freq = std::abs(j.lin.imag()) + 2.0 * std::abs(j.e1.slope.real() * j.e1.offset.imag()) +
                      2.0 * std::abs(j.e2.slope.real() * j.e2.offset.imag()) +
                      2.0 * std::abs(j.e1.slope.imag() * j.e1.offset.real()) +
                      2.0 * std::abs(j.e2.slope.imag() * j.e2.offset.real());
  const double steep = std::max(std::abs(j.e1.slope), std::abs(j.e2.slope));
  double h = sigma;
  if (steep > 0.0) h = std::min(h, 3.0 / steep);
  if (freq > 0.0) h = std::min(h, 3.0 / freq);
  return {center - 13.0 * sigma, center + 13.0 * sigma, h};
}

using ErfKey = std::array<double, 4>;

ErfKey erf_key(const ErfFactor& e) {
  return {e.slope.real(), e.slope.imag(), e.offset.real(), e.offset.imag()};
}

// Sum over jobs of E[exp(quad t^2 + lin t + log_prefactor) erf erf], t ~ N(mean, var).
// Jobs sharing a quadratic coefficient share one composite Gauss-Legendre grid
// and one erf table per distinct erf.
Complex batch_erf2(const std::vector<Erf2Job>& jobs, double mean, double var) {
  Complex total = 0.0;
  if (jobs.empty()) return total;
  if (var == 0.0) {
    for (const Erf2Job& j : jobs) {
      const numerics::ScaledErf a = numerics::erf_scaled(j.e1.slope * mean + j.e1.offset);
      const numerics::ScaledErf b = numerics::erf_scaled(j.e2.slope * mean + j.e2.offset);
      total += std::exp(j.quad * mean * mean + j.lin * mean + j.log_prefactor + a.log_scale + b.log_scale) *
               a.mantissa * b.mantissa;
    }
    return total;
  }
  static const numerics::QuadratureRule gl = numerics::gauss_legendre(16);
  std::map<double, std::vector<const Erf2Job*>> groups;
  for (const Erf2Job& j : jobs) groups[j.quad].push_back(&j);
  const double norm_log = -0.5 * std::log(2.0 * std::numbers::pi * var);
  for (const auto& [quad, members] : groups) {
    Window w{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
             std::numeric_limits<double>::infinity()};
    for (const Erf2Job* j : members) {
      const Window jw = job_window(*j, mean, var);
      w.lo = std::min(w.lo, jw.lo);
      w.hi = std::max(w.hi, jw.hi);
      w.h = std::min(w.h, jw.h);
    }
    const int panels = std::clamp(static_cast<int>(std::ceil((w.hi - w.lo) / w.h)), 4, 20000);
    const double width = (w.hi - w.lo) / panels;
    const std::size_t n = static_cast<std::size_t>(panels) * gl.order;
    std::vector<double> t(n);
    std::vector<double> base(n);
    for (int p = 0; p < panels; ++p) {
      for (int i = 0; i < gl.order; ++i) {
        const std::size_t k = static_cast<std::size_t>(p) * gl.order + i;
        t[k] = w.lo + width * (p + 0.5 * (gl.nodes[i] + 1.0));
        base[k] = std::log(0.5 * width * gl.weights[i]) + norm_log - 0.5 * (t[k] - mean) * (t[k] - mean) / var +
                  quad * t[k] * t[k];
      }
    }
    std::map<ErfKey, std::vector<numerics::ScaledErf>> table;
    auto values = [&](const ErfFactor& e) -> const std::vector<numerics::ScaledErf>& {
      auto [it, fresh] = table.try_emplace(erf_key(e));
      if (fresh) {
        it->second.resize(n);
        for (std::size_t k = 0; k < n; ++k) it->second[k] = numerics::erf_scaled(e.slope * t[k] + e.offset);
      }
      return it->second;
    };
    for (const Erf2Job* j : members) {
      const auto& a = values(j->e1);
      const auto& b = values(j->e2);
      Complex sum = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        sum += std::exp(base[k] + j->lin * t[k] + a[k].log_scale + b[k].log_scale) * (a[k].mantissa * b[k].mantissa);
      }
      total += std::exp(j->log_prefactor) * sum;
    }
  }
  return total;
}

}  // namespace

AffineState affine_displace(const AffineState& s, Mode mode, Complex zeta) {
  AffineState out = s;
  const int m = idx(mode);
  for (AffineKet& k : out) {
    const Complex q = k.shift[m];
    const double p = k.scale[m];
    k.amp *= std::exp(0.5 * (zeta * std::conj(q) - std::conj(zeta) * q));
    k.lin += -0.5 * std::conj(zeta) * p;
    k.lin_conj += 0.5 * zeta * p;
    k.shift[m] += zeta;
  }
  return out;
}

AffineState affine_kerr(const AffineState& s, Mode mode) {
  AffineState out;
  out.reserve(2 * s.size());
  const int m = idx(mode);
  for (const AffineKet& k : s) {
    AffineKet keep = k;
    keep.amp *= kKerrAmp;
    out.push_back(keep);
    AffineKet flip = k;
    flip.amp *= kI * kKerrAmp;
    flip.scale[m] = -flip.scale[m];
    flip.shift[m] = -flip.shift[m];
    out.push_back(flip);
  }
  return out;
}

AffineState affine_beamsplit(const AffineState& s, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("beamsplit: transmission amplitude must lie in [0, 1]");
  const double r = std::sqrt(1.0 - t * t);
  AffineState out = s;
  for (AffineKet& k : out) {
    const double pa = k.scale[0], pb = k.scale[1];
    const Complex qa = k.shift[0], qb = k.shift[1];
    k.scale = {t * pa + r * pb, -r * pa + t * pb};
    k.shift = {t * qa + r * qb, -r * qa + t * qb};
  }
  return out;
}

AffineState affine_bell_setting(const AffineState& s, double theta, Mode mode, double d) {
  if (!(d > 0.0)) throw std::invalid_argument("apply_bell_setting: d must be positive");
  return affine_kerr(affine_displace(affine_kerr(s, mode), mode, Complex{0.0, theta / (2.0 * d)}), mode);
}

AffineState affine_leggett_setting(const AffineState& s, const LeggettSetting& setting, Mode mode, double d) {
  if (!(d > 0.0)) throw std::invalid_argument("apply_leggett_setting: d must be positive");
  const Complex outer{0.0, setting.phi / (4.0 * d)};
  const Complex inner{0.0, setting.theta / (4.0 * d)};
  AffineState r = affine_displace(s, mode, outer);
  r = affine_kerr(r, mode);
  r = affine_displace(r, mode, inner);
  r = affine_kerr(r, mode);
  return affine_displace(r, mode, -outer);
}

AffineState affine_setting(const AffineState& s, const LocalSetting& setting, Mode mode, double d) {
  if (setting.kind == LocalSetting::Kind::Bell) return affine_bell_setting(s, setting.theta, mode, d);
  return affine_leggett_setting(s, {setting.theta, setting.phi}, mode, d);
}

Complex affine_expectation(const AffineState& bra, const AffineState& ket, Observable obs, double eta,
                           const ThermalVariable& z) {
  const bool sign_a = obs == Observable::SignA || obs == Observable::SignAB;
  const bool sign_b = obs == Observable::SignB || obs == Observable::SignAB;
  Complex total = 0.0;
  std::vector<Erf2Job> x_jobs, y_jobs;
  std::vector<ErfFactor> erfs;
  erfs.reserve(2);
  for (const AffineKet& k : ket) {
    for (const AffineKet& b : bra) {
      double quad = 0.0;
      Complex c_z = k.lin + std::conj(b.lin_conj);   // coefficient of z
      Complex c_zc = k.lin_conj + std::conj(b.lin);  // coefficient of conj(z)
      Complex c0 = 0.0;
      erfs.clear();
      Complex constant = k.amp * std::conj(b.amp);
      for (int m = 0; m < 2; ++m) {
        const double p = k.scale[m], pp = b.scale[m];
        const Complex u = k.shift[m], v = b.shift[m];
        quad += -0.5 * (p - pp) * (p - pp);
        c_zc += pp * u - 0.5 * (p * u + pp * v);
        c_z += p * std::conj(v) - 0.5 * (p * std::conj(u) + pp * std::conj(v));
        c0 += std::conj(v) * u - 0.5 * (std::norm(u) + std::norm(v));
        if ((m == 0 && sign_a) || (m == 1 && sign_b)) {
          ErfFactor e = lossy_sign(p, pp, u, v, eta);
          if (e.axis == Axis::None) {
            constant *= numerics::erf(e.offset);
          } else {
            erfs.push_back(e);
          }
        }
      }
      if (constant == Complex{}) continue;
      const Complex bx = c_z + c_zc;
      const Complex by = kI * (c_z - c_zc);
      const Complex log_const = std::log(constant) + c0;
      if (erfs.size() == 2 && erfs[0].axis == erfs[1].axis) {
        // The closed-form axis folds into the prefactor; the other is batched.
        const bool on_x = erfs[0].axis == Axis::X;
        const analytic::GaussianTilt other =
            on_x ? analytic::gaussian_tilt(quad, by, 0.0, z.var) : analytic::gaussian_tilt(quad, bx, z.mean, z.var);
        Erf2Job job{quad, on_x ? bx : by, erfs[0], erfs[1], log_const + other.log_scale};
        (on_x ? x_jobs : y_jobs).push_back(job);
        continue;
      }
      const ErfFactor* ex = nullptr;
      const ErfFactor* ey = nullptr;
      for (const ErfFactor& e : erfs) (e.axis == Axis::X ? ex : ey) = &e;
      const analytic::GaussianTilt tx = analytic::gaussian_tilt(quad, bx, z.mean, z.var);
      const analytic::GaussianTilt ty = analytic::gaussian_tilt(quad, by, 0.0, z.var);
      Complex value;
      if (ex && ey) {
        value = analytic::expect_erf(tx, ex->slope, ex->offset, log_const) *
                analytic::expect_erf(ty, ey->slope, ey->offset);
      } else if (ex) {
        value = analytic::expect_erf(tx, ex->slope, ex->offset, log_const + ty.log_scale);
      } else if (ey) {
        value = analytic::expect_erf(ty, ey->slope, ey->offset, log_const + tx.log_scale);
      } else {
        value = std::exp(log_const + tx.log_scale + ty.log_scale);
      }
      total += value;
    }
  }
  total += batch_erf2(x_jobs, z.mean, z.var);
  total += batch_erf2(y_jobs, 0.0, z.var);
  return total;
}

Complex expect_exp_erf2(double a, Complex b, double mean, double var, Complex k1, Complex c1, Complex k2,
                        Complex c2) {
  const ErfFactor e1{Axis::X, k1, c1};
  const ErfFactor e2{Axis::X, k2, c2};
  return batch_erf2({Erf2Job{a, b, e1, e2, 0.0}}, mean, var);
}

}  // namespace cvbell::thermal
