#pragma once

#include <stdexcept>

#include <Eigen/Dense>

#include "cvbell/types.hpp"

namespace cvbell::fock {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Raised when a truncated number basis is too small for the amplitudes used.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Smallest dimension accepted for a coherent amplitude of modulus r.
int min_dim(double r);

/// e^{-|g|^2/2} g^n / sqrt(n!), n < dim.
Vector fock_coherent(Complex gamma, int dim);

/// exp(zeta a^+ - zeta^* a), exponentiated in a padded basis and cropped.
Matrix fock_displace(Complex zeta, int dim);

/// diag(exp(-i pi n^2 / 2)).
Matrix fock_kerr(int dim);

/// Two-mode mixer on the dim^2 product basis (index m * dim + n for |m>_A |n>_B),
/// with |g_A, g_B> -> |t g_A + r g_B, -r g_A + t g_B>.
Matrix fock_beamsplit(double t, int dim);

/// Single-mode loss channel with intensity transmission eta.
Matrix fock_loss(const Matrix& rho, double eta);

/// Adjoint loss channel, for Heisenberg-picture observables.
Matrix fock_loss_adjoint(const Matrix& op, double eta);

/// S_mn = int sign(x) psi_m(x) psi_n(x) dx with x = (a + a^+)/sqrt(2).
Matrix fock_sign(int dim);

/// Two-mode pure state held as its coefficient matrix psi(m, n) = <m, n|psi>.
class TwoModeState {
 public:
  TwoModeState(Matrix coeffs);

  const Matrix& coeffs() const { return c_; }
  int dim() const { return static_cast<int>(c_.rows()); }

  void apply(const Matrix& u, Mode mode);
  void beamsplit(double t);

  double norm2() const;
  /// <psi| X (x) Y |psi>
  Complex expectation(const Matrix& x, const Matrix& y) const;
  /// Population in the top `levels` number states of either mode over norm2.
  double tail_population(int levels = 5) const;

 private:
  Matrix c_;
};

/// Entangled-state branch and two local settings, evaluated in Fock space.
struct OracleScenario {
  Family family = Family::QubitEts;
  Complex alpha{1.0, 0.0};
  Complex beta{1.0, 0.0};  // unused by AltEts
  double d = 1.0;
  double eta = 1.0;
  LocalSetting setting_a;
  LocalSetting setting_b;
  int dim = 60;
};

TwoModeState oracle_branch(const OracleScenario& s);

/// Tr[rho S_eta x S_eta] / Tr[rho]; throws TruncationError when the tail of
/// the final state exceeds 1e-10.
double oracle_correlation(const OracleScenario& s);

/// (Tr rho, Tr rho S_A, Tr rho S_B, Tr rho S_A S_B), unnormalised.
std::array<Complex, 4> oracle_sign_moments(const OracleScenario& s);

}  // namespace cvbell::fock
