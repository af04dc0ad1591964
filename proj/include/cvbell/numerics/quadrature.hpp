#pragma once

#include <vector>

namespace cvbell::numerics {

/// Nodes and weights for integrals of the form  int f(x) exp(-x^2) dx.
struct QuadratureRule {
  std::vector<double> nodes;    // strictly increasing, symmetric about 0
  std::vector<double> weights;  // strictly positive, sum to sqrt(pi)
  int order = 0;
};

inline constexpr int kMaxHermiteOrder = 200;

/// Gauss-Hermite rule of the given order (1..200). Nodes are found by Newton
/// iteration on the orthonormal Hermite recurrence, weights from the
/// Christoffel function. Throws std::invalid_argument outside the range.
QuadratureRule gauss_hermite(int order);

/// Gauss-Legendre rule on [-1, 1]; used by composite integrators.
QuadratureRule gauss_legendre(int order);

}  // namespace cvbell::numerics
