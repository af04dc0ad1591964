#include "cvbell/fock/oracle.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "cvbell/numerics/quadrature.hpp"

namespace cvbell::fock {
namespace {

const Complex kI{0.0, 1.0};

void check_dim(int dim) {
  if (dim < 2) throw std::invalid_argument("fock: dimension must be at least 2");
}

Matrix annihilation(int dim) {
  Matrix a = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

std::vector<Matrix> loss_kraus(int dim, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("fock_loss: eta must lie in (0, 1]");
  std::vector<Matrix> ks;
  if (eta == 1.0) {
    ks.push_back(Matrix::Identity(dim, dim));
    return ks;
  }
  for (int k = 0; k < dim; ++k) {
    Matrix e = Matrix::Zero(dim, dim);
    for (int n = k; n < dim; ++n) {
      const double lg = 0.5 * (log_binomial(n, k) + (n - k) * std::log(eta) + k * std::log1p(-eta));
      e(n - k, n) = std::exp(lg);
    }
    ks.push_back(std::move(e));
  }
  return ks;
}

// Hermite functions psi_0..psi_{n-1} at x.
void hermite_functions(double x, int n, std::vector<double>& out) {
  out.assign(n, 0.0);
  out[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  if (n > 1) out[1] = std::sqrt(2.0) * x * out[0];
  for (int k = 1; k + 1 < n; ++k) {
    out[k + 1] = std::sqrt(2.0 / (k + 1)) * x * out[k] - std::sqrt(static_cast<double>(k) / (k + 1)) * out[k - 1];
  }
}

Matrix half_line_gram(int dim, int panels, double upper) {
  static const numerics::QuadratureRule gl = numerics::gauss_legendre(20);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<double> psi;
  const double w = upper / panels;
  for (int p = 0; p < panels; ++p) {
    for (int i = 0; i < gl.order; ++i) {
      const double x = w * (p + 0.5 * (gl.nodes[i] + 1.0));
      hermite_functions(x, dim, psi);
      const Eigen::Map<Eigen::VectorXd> v(psi.data(), dim);
      g.noalias() += (0.5 * w * gl.weights[i]) * v * v.transpose();
    }
  }
  return g.cast<Complex>();
}

}  // namespace

int min_dim(double r) { return static_cast<int>(std::ceil(r * r + 6.0 * r + 10.0)); }

Vector fock_coherent(Complex gamma, int dim) {
  check_dim(dim);
  if (dim < min_dim(std::abs(gamma))) throw TruncationError("fock_coherent: dimension too small for amplitude");
  Vector v(dim);
  v(0) = std::exp(-0.5 * std::norm(gamma));
  for (int n = 1; n < dim; ++n) v(n) = v(n - 1) * gamma / std::sqrt(static_cast<double>(n));
  return v;
}

Matrix fock_displace(Complex zeta, int dim) {
  check_dim(dim);
  const double r = std::abs(zeta);
  const int padded = dim + 40 + static_cast<int>(std::ceil(4.0 * r * r + 12.0 * r));
  const Matrix a = annihilation(padded);
  const Matrix gen = zeta * a.adjoint() - std::conj(zeta) * a;
  const Matrix full = gen.exp();
  return full.topLeftCorner(dim, dim);
}

Matrix fock_kerr(int dim) {
  check_dim(dim);
  Matrix k = Matrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) k(n, n) = (n % 2 == 0) ? Complex{1.0, 0.0} : -kI;
  return k;
}

Matrix fock_beamsplit(double t, int dim) {
  check_dim(dim);
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("beamsplit: transmission amplitude must lie in [0, 1]");
  const double xi = std::acos(t);
  Matrix result = Matrix::Zero(dim * dim, dim * dim);
  // exp(xi (a^+ b - a b^+)) conserves m + n, so exponentiate block by block.
  for (int total = 0; total <= 2 * (dim - 1); ++total) {
    std::vector<int> ms;
    for (int m = std::max(0, total - dim + 1); m <= std::min(total, dim - 1); ++m) ms.push_back(m);
    const int k = static_cast<int>(ms.size());
    Matrix g = Matrix::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      const int m = ms[i], n = total - m;
      // a^+ b |m, n> = sqrt((m+1) n) |m+1, n-1>
      if (i + 1 < k) {
        const double c = std::sqrt((m + 1.0) * n);
        g(i + 1, i) += xi * c;
        g(i, i + 1) -= xi * c;
      }
    }
    const Matrix u = g.exp();
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        result(ms[i] * dim + (total - ms[i]), ms[j] * dim + (total - ms[j])) = u(i, j);
      }
    }
  }
  return result;
}

Matrix fock_loss(const Matrix& rho, double eta) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const Matrix& e : loss_kraus(static_cast<int>(rho.rows()), eta)) out += e * rho * e.adjoint();
  return out;
}

Matrix fock_loss_adjoint(const Matrix& op, double eta) {
  Matrix out = Matrix::Zero(op.rows(), op.cols());
  for (const Matrix& e : loss_kraus(static_cast<int>(op.rows()), eta)) out += e.adjoint() * op * e;
  return out;
}

Matrix fock_sign(int dim) {
  check_dim(dim);
  const double upper = std::sqrt(2.0 * dim + 1.0) + 12.0;
  int panels = 16;
  Matrix g = half_line_gram(dim, panels, upper);
  for (int round = 0; round < 8; ++round) {
    panels *= 2;
    const Matrix next = half_line_gram(dim, panels, upper);
    const double change = (next - g).cwiseAbs().maxCoeff();
    g = next;
    if (change < 1e-13) break;
  }
  Matrix s = Matrix::Zero(dim, dim);
  for (int m = 0; m < dim; ++m) {
    for (int n = 0; n < dim; ++n) {
      if ((m + n) % 2 == 1) s(m, n) = 2.0 * g(m, n);
    }
  }
  return s;
}

TwoModeState::TwoModeState(Matrix coeffs) : c_(std::move(coeffs)) {
  if (c_.rows() != c_.cols()) throw std::invalid_argument("TwoModeState: square coefficient matrix required");
}

void TwoModeState::apply(const Matrix& u, Mode mode) {
  if (mode == Mode::A) {
    c_ = u * c_;
  } else {
    c_ = c_ * u.transpose();
  }
}

void TwoModeState::beamsplit(double t) {
  const int n = dim();
  const Matrix u = fock_beamsplit(t, n);
  Vector v(n * n);
  for (int m = 0; m < n; ++m) {
    for (int k = 0; k < n; ++k) v(m * n + k) = c_(m, k);
  }
  const Vector w = u * v;
  for (int m = 0; m < n; ++m) {
    for (int k = 0; k < n; ++k) c_(m, k) = w(m * n + k);
  }
}

double TwoModeState::norm2() const { return c_.squaredNorm(); }

Complex TwoModeState::expectation(const Matrix& x, const Matrix& y) const {
  // sum conj(c_mn) X_mm' Y_nn' c_m'n' = Tr(C^+ X C Y^T)
  return (c_.adjoint() * x * c_ * y.transpose()).trace();
}

double TwoModeState::tail_population(int levels) const {
  const int n = dim();
  const int lo = std::max(0, n - levels);
  double tail = 0.0;
  for (int m = 0; m < n; ++m) {
    for (int k = 0; k < n; ++k) {
      if (m >= lo || k >= lo) tail += std::norm(c_(m, k));
    }
  }
  return tail / norm2();
}

namespace {

Matrix setting_unitary(const LocalSetting& s, double d, int dim) {
  if (!(d > 0.0)) throw std::invalid_argument("setting: d must be positive");
  const Matrix k = fock_kerr(dim);
  if (s.kind == LocalSetting::Kind::Bell) return k * fock_displace(Complex{0.0, s.theta / (2.0 * d)}, dim) * k;
  const Complex outer{0.0, s.phi / (4.0 * d)};
  const Complex inner{0.0, s.theta / (4.0 * d)};
  return fock_displace(-outer, dim) * k * fock_displace(inner, dim) * k * fock_displace(outer, dim);
}

void guard(const TwoModeState& st) {
  if (st.tail_population() > 1e-10) throw TruncationError("oracle: population in the top Fock levels exceeds 1e-10");
}

}  // namespace

TwoModeState oracle_branch(const OracleScenario& s) {
  const int dim = s.dim;
  if (s.family == Family::QubitEts) {
    const Vector a = fock_coherent(s.alpha, dim), am = fock_coherent(-s.alpha, dim);
    const Vector b = fock_coherent(s.beta, dim), bm = fock_coherent(-s.beta, dim);
    TwoModeState st((a * b.transpose() + am * bm.transpose()) / std::sqrt(2.0));
    guard(st);
    return st;
  }
  if (!(s.d > 0.0)) throw std::invalid_argument("alt branch: d must be positive");
  const Vector a = fock_kerr(dim) * fock_coherent(s.alpha, dim);
  Vector vac = Vector::Zero(dim);
  vac(0) = 1.0;
  TwoModeState st(a * vac.transpose());
  st.beamsplit(std::sqrt(0.5));
  st.apply(fock_displace(Complex{0.0, std::numbers::pi / (8.0 * s.d)}, dim), Mode::A);
  guard(st);
  return st;
}

std::array<Complex, 4> oracle_sign_moments(const OracleScenario& s) {
  TwoModeState st = oracle_branch(s);
  st.apply(setting_unitary(s.setting_a, s.d, s.dim), Mode::A);
  st.apply(setting_unitary(s.setting_b, s.d, s.dim), Mode::B);
  guard(st);
  const Matrix sg = fock_loss_adjoint(fock_sign(s.dim), s.eta);
  const Matrix id = Matrix::Identity(s.dim, s.dim);
  return {st.expectation(id, id), st.expectation(sg, id), st.expectation(id, sg), st.expectation(sg, sg)};
}

double oracle_correlation(const OracleScenario& s) {
  const auto m = oracle_sign_moments(s);
  if (std::abs(m[0]) <= 1e-300) throw std::domain_error("oracle_correlation: zero trace");
  return (m[3] / m[0]).real();
}

}  // namespace cvbell::fock
