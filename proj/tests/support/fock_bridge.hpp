#pragma once

// Dense number-basis images of coherent-dyad operators, so each engine
// operation can be compared with the same operation done by matrices.
// Two-mode index: m * dim + n for |m>_A |n>_B.

#include <array>
#include <cmath>

#include "cvbell/coherent/engine.hpp"
#include "cvbell/fock/oracle.hpp"

namespace cvbell::testing {

using fock::Matrix;
using fock::Vector;

/// <n|g> for n < dim, no truncation guard.
inline Vector coherent_vec(Complex g, int dim) {
  Vector v(dim);
  v(0) = std::exp(-0.5 * std::norm(g));
  for (int n = 1; n < dim; ++n) v(n) = v(n - 1) * g / std::sqrt(static_cast<double>(n));
  return v;
}

inline Vector two_mode_vec(Complex a, Complex b, int dim) {
  const Vector va = coherent_vec(a, dim), vb = coherent_vec(b, dim);
  Vector v(dim * dim);
  for (int m = 0; m < dim; ++m) {
    for (int n = 0; n < dim; ++n) v(m * dim + n) = va(m) * vb(n);
  }
  return v;
}

inline Matrix to_fock(const coherent::CoherentOperator& op, int dim) {
  Matrix rho = Matrix::Zero(dim * dim, dim * dim);
  for (const coherent::Dyad& y : op.dyads()) {
    rho += y.coeff * two_mode_vec(y.ket_a, y.ket_b, dim) * two_mode_vec(y.bra_a, y.bra_b, dim).adjoint();
  }
  return rho;
}

/// u acting on one mode of the product space.
inline Matrix on_mode(const Matrix& u, Mode mode, int dim) {
  Matrix out = Matrix::Zero(dim * dim, dim * dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      for (int k = 0; k < dim; ++k) {
        if (mode == Mode::A) {
          out(i * dim + k, j * dim + k) = u(i, j);
        } else {
          out(k * dim + i, k * dim + j) = u(i, j);
        }
      }
    }
  }
  return out;
}

/// Single-mode linear map f applied to one mode of a two-mode operator.
template <class F>
Matrix map_on_mode(const Matrix& rho, Mode mode, int dim, F f) {
  Matrix out = Matrix::Zero(dim * dim, dim * dim);
  for (int p = 0; p < dim; ++p) {
    for (int q = 0; q < dim; ++q) {
      Matrix block(dim, dim);
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
          block(i, j) = mode == Mode::A ? rho(i * dim + p, j * dim + q) : rho(p * dim + i, q * dim + j);
        }
      }
      const Matrix mapped = f(block);
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
          (mode == Mode::A ? out(i * dim + p, j * dim + q) : out(p * dim + i, q * dim + j)) = mapped(i, j);
        }
      }
    }
  }
  return out;
}

inline Matrix loss_on_mode(const Matrix& rho, Mode mode, double eta, int dim) {
  return map_on_mode(rho, mode, dim, [eta](const Matrix& x) { return fock::fock_loss(x, eta); });
}

/// (Tr rho, Tr rho S_A, Tr rho S_B, Tr rho S_A S_B) with loss eta on both modes.
inline std::array<Complex, 4> fock_sign_moments(const Matrix& rho, double eta, int dim) {
  const Matrix s = fock::fock_loss_adjoint(fock::fock_sign(dim), eta);
  const Matrix sa = on_mode(s, Mode::A, dim), sb = on_mode(s, Mode::B, dim);
  return {rho.trace(), (rho * sa).trace(), (rho * sb).trace(), (rho * sa * sb).trace()};
}

inline double fock_correlation(const Matrix& rho, double eta, int dim) {
  const auto m = fock_sign_moments(rho, eta, dim);
  return (m[3] / m[0]).real();
}

}  // namespace cvbell::testing
