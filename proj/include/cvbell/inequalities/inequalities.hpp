#pragma once

#include <optional>
#include <vector>

#include "cvbell/numerics/optimizer.hpp"
#include "cvbell/thermal/ensemble.hpp"
#include "cvbell/types.hpp"

namespace cvbell::inequalities {

/// Where correlations come from.
struct Backend {
  enum class Kind { Analytic, Ensemble };
  Kind kind = Kind::Analytic;
  Family family = Family::QubitEts;  // Ensemble only; Analytic is QubitEts
  thermal::EnsembleOptions ensemble;

  static Backend analytic() { return {}; }
  static Backend ensemble_of(Family f, thermal::EnsembleOptions o = {}) { return {Kind::Ensemble, f, o}; }
};

/// B(angles) from the chosen backend.
double bell_value(const ChshAngles& angles, const EtsParams& params, const Backend& backend);

/// [-pi, pi]^4 with the given optimizer settings.
numerics::OptimizerConfig default_chsh_config();

struct ChshMax {
  double b_max = 0.0;  // max |B|
  ChshAngles angles;
  bool converged = false;
  int evaluations = 0;
};

/// Maximises |B| over the four angles with multistart Nelder-Mead.
/// `warm_starts` seed the first restarts (angle quadruples).
ChshMax chsh_max(const EtsParams& params, const Backend& backend, const numerics::OptimizerConfig& opt,
                 const std::vector<ChshAngles>& warm_starts = {});

/// Settings of the seven-vector Leggett test for one azimuth phi.
struct LeggettSuite {
  LeggettSetting a1, a2, a3;
  LeggettSetting b1, b2, b3, b4, b5, b6, b7;
  double phi = 0.0;
};

LeggettSuite leggett_suite(double phi);

struct LeggettOptions {
  Backend backend = Backend::ensemble_of(Family::QubitEts);
  /// Bob applies his rotation with azimuth -phi. The heralded state's
  /// correlation tensor is diag(1, -1, 1), so unmirrored settings make the
  /// two groups of L cancel.
  bool mirror_bob_azimuth = true;
  /// c in  L - 8 + c |sin(phi/2)|.
  double sine_coefficient = 2.0;
};

/// L = |C(a1,b1) + C(a2,b2) + C(a1,b5) + C(a2,b6)| + |C(a2,b3) + C(a3,b4) + C(a2,b6) + C(a3,b7)|
/// with every correlation from apply_leggett_setting on both modes.
double leggett_L(const EtsParams& params, double phi, const LeggettOptions& options = {});

/// L - 8 + c |sin(phi/2)|.
double leggett_script(const EtsParams& params, double phi, const LeggettOptions& options = {});

inline constexpr double kLeggettPhi = 0.2507;

struct LeggettMax {
  double value = 0.0;
  double phi = kLeggettPhi;
  bool converged = true;
};

/// Fixed phi = 0.2507, or maximised over phi in (0, pi/2) when optimize is set.
LeggettMax leggett_script_max(const EtsParams& params, bool optimize, const LeggettOptions& options = {},
                              const numerics::OptimizerConfig* opt = nullptr);

/// Maximal runs of consecutive grid points where B > 2 and L_script <= 0.
struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

std::vector<Window> coexistence_windows(const std::vector<double>& d, const std::vector<double>& b_max,
                                        const std::vector<double>& l_script);

/// The window containing d, if any.
std::optional<Window> window_containing(const std::vector<Window>& windows, double d);

}  // namespace cvbell::inequalities
