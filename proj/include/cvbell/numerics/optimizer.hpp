#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace cvbell::numerics {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct OptimizerConfig {
  int max_iters = 400;      // per restart
  double tolerance = 1e-8;  // simplex diameter at convergence
  int restarts = 16;
  std::uint64_t seed = 1;
  std::vector<Interval> bounds;
  int threads = 1;  // restarts evaluated concurrently when > 1

  /// Throws std::invalid_argument if any invariant is violated.
  void validate() const;
};

struct OptimizeResult {
  std::vector<double> argmin;
  double min = 0.0;
  bool converged = false;  // best restart met the tolerance
  int evaluations = 0;
  int best_restart = -1;
};

using Objective = std::function<double(std::span<const double>)>;

/// Bounded Nelder-Mead with multistart. Restart k starts from the k-th entry
/// of `warm_starts` if present, otherwise from a point drawn uniformly in the
/// box by a generator seeded with `config.seed`. Trial points are projected
/// onto the box. The result is a pure function of (f, config, warm_starts).
OptimizeResult minimize(const Objective& f, const OptimizerConfig& config,
                        const std::vector<std::vector<double>>& warm_starts = {});

/// Single Nelder-Mead descent from `start`; exposed for tests.
OptimizeResult nelder_mead(const Objective& f, std::vector<double> start, const OptimizerConfig& config);

}  // namespace cvbell::numerics
