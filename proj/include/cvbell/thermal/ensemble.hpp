#pragma once

#include <cstdint>
#include <vector>

#include "cvbell/types.hpp"

namespace cvbell::thermal {

struct PfuncSample {
  Complex alpha;
  double weight = 0.0;
};

/// Discretised thermal P-function: Re and Im of alpha are independent normals
/// with means (d, 0) and variance (V - 1) / 4.
struct PfuncGrid {
  enum class Kind { Quadrature, MonteCarlo };
  std::vector<PfuncSample> samples;
  double V = 1.0;
  double d = 0.0;
  Kind kind = Kind::Quadrature;
  std::uint64_t seed = 0;  // MonteCarlo only
  int order = 1;           // points per axis, or sample count

  double total_weight() const;
};

/// Tensor Gauss-Hermite grid; V = 1 collapses to the single sample (d, 1).
PfuncGrid pfunc_grid(double V, double d, int order);

/// count equally weighted samples; sample i depends only on (seed, i).
PfuncGrid pfunc_samples(double V, double d, int count, std::uint64_t seed);

/// How the P-average is done.
///   Moment     - exact Gaussian moments of the affine coherent labels (erfs in
///                closed form, one Gauss-Legendre axis when two erfs share it).
///   Quadrature - coherent engine on a tensor Gauss-Hermite grid.
enum class Scheme { Moment, Quadrature };

struct EnsembleOptions {
  Scheme scheme = Scheme::Moment;
  int order = 12;                     // Quadrature: points per real axis
  bool check_convergence = true;      // Quadrature: compare against 2 * order
  double convergence_tolerance = 1e-4;
};

struct EnsembleValue {
  double value = 0.0;
  bool converged = true;
  double order_change = 0.0;  // |C(order) - C(2 order)|, Quadrature only
  int order_used = 0;
};

/// Tr[rho (S_eta x S_eta)] / Tr[rho] for the thermal mixture of branches, with
/// setting_a applied on mode A and setting_b on mode B. The mixture is weighted
/// by the unnormalised branch traces.
EnsembleValue ensemble_correlation(Family family, const LocalSetting& setting_a, const LocalSetting& setting_b,
                                   const EtsParams& params, const EnsembleOptions& options = {});

struct SettingPair {
  LocalSetting a;
  LocalSetting b;
};

/// Several correlations of the same ensemble; per-setting work is shared.
/// `converged` (optional) receives the Quadrature convergence flag, judged on
/// the sum of |C|.
std::vector<double> ensemble_correlations(Family family, const std::vector<SettingPair>& pairs,
                                          const EtsParams& params, const EnsembleOptions& options = {},
                                          bool* converged = nullptr);

/// B = C(a, b) + C(a', b) + C(a, b') - C(a', b'), sharing work between terms.
EnsembleValue ensemble_bell(Family family, const ChshAngles& angles, const EtsParams& params,
                            const EnsembleOptions& options = {});

/// Tr of the unnormalised ensemble state.
double ensemble_trace(Family family, const EtsParams& params);

struct EntropyEstimate {
  double value = 0.0;
  double std_error = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
};

/// S = 1 - Tr[rho^2] for the qubit-heralded state, by Monte Carlo over pairs
/// of independent branch samples. Requires samples >= 10^4.
EntropyEstimate linear_entropy(double V, double d, int samples, std::uint64_t seed);

}  // namespace cvbell::thermal
