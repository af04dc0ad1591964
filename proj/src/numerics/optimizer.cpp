#include "cvbell/numerics/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <random>
#include <stdexcept>

namespace cvbell::numerics {
namespace {

using Point = std::vector<double>;

void project(Point& x, const std::vector<Interval>& bounds) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], bounds[i].lo, bounds[i].hi);
}

double diameter(const std::vector<Point>& simplex) {
  double best = 0.0;
  for (std::size_t j = 1; j < simplex.size(); ++j) {
    double d = 0.0;
    for (std::size_t i = 0; i < simplex[0].size(); ++i) d = std::max(d, std::abs(simplex[j][i] - simplex[0][i]));
    best = std::max(best, d);
  }
  return best;
}

// Uniform draw from 53 random bits; identical on every platform.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

void OptimizerConfig::validate() const {
  if (!(tolerance > 0.0)) throw std::invalid_argument("optimizer: tolerance must be positive");
  if (restarts < 1) throw std::invalid_argument("optimizer: restarts must be >= 1");
  if (max_iters < 1) throw std::invalid_argument("optimizer: max_iters must be >= 1");
  if (bounds.empty()) throw std::invalid_argument("optimizer: bounds must be nonempty");
  for (const auto& b : bounds) {
    if (!(b.lo < b.hi)) throw std::invalid_argument("optimizer: each bound needs lo < hi");
  }
}

OptimizeResult nelder_mead(const Objective& f, Point start, const OptimizerConfig& config) {
  const std::size_t n = start.size();
  const auto& bounds = config.bounds;
  project(start, bounds);

  OptimizeResult out;
  auto eval = [&](const Point& x) {
    ++out.evaluations;
    return f(x);
  };

  std::vector<Point> simplex(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) {
    const double width = bounds[i].hi - bounds[i].lo;
    double step = 0.1 * width;
    if (simplex[i + 1][i] + step > bounds[i].hi) step = -step;
    simplex[i + 1][i] += step;
  }
  std::vector<double> values(n + 1);
  for (std::size_t j = 0; j <= n; ++j) values[j] = eval(simplex[j]);

  std::vector<std::size_t> order(n + 1);
  Point centroid(n), trial(n), trial2(n);
  for (int iter = 0; iter < config.max_iters; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    {
      std::vector<Point> s2(n + 1);
      std::vector<double> v2(n + 1);
      for (std::size_t k = 0; k <= n; ++k) {
        s2[k] = simplex[order[k]];
        v2[k] = values[order[k]];
      }
      simplex.swap(s2);
      values.swap(v2);
    }
    if (diameter(simplex) <= config.tolerance) {
      out.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[j][i] / static_cast<double>(n);
    }
    const Point& worst = simplex[n];
    auto along = [&](double scale, Point& dst) {
      for (std::size_t i = 0; i < n; ++i) dst[i] = centroid[i] + scale * (worst[i] - centroid[i]);
      project(dst, bounds);
    };

    along(-1.0, trial);
    const double f_reflect = eval(trial);
    if (f_reflect < values[0]) {
      along(-2.0, trial2);
      const double f_expand = eval(trial2);
      if (f_expand < f_reflect) {
        simplex[n] = trial2;
        values[n] = f_expand;
      } else {
        simplex[n] = trial;
        values[n] = f_reflect;
      }
      continue;
    }
    if (f_reflect < values[n - 1]) {
      simplex[n] = trial;
      values[n] = f_reflect;
      continue;
    }
    const bool outside = f_reflect < values[n];
    along(outside ? -0.5 : 0.5, trial2);
    const double f_contract = eval(trial2);
    if (f_contract < (outside ? f_reflect : values[n])) {
      simplex[n] = trial2;
      values[n] = f_contract;
      continue;
    }
    // Shrink towards the best vertex.
    for (std::size_t j = 1; j <= n; ++j) {
      for (std::size_t i = 0; i < n; ++i) simplex[j][i] = simplex[0][i] + 0.5 * (simplex[j][i] - simplex[0][i]);
      values[j] = eval(simplex[j]);
    }
  }

  const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  out.argmin = simplex[best];
  out.min = values[best];
  if (!out.converged) out.converged = diameter(simplex) <= config.tolerance;
  return out;
}

OptimizeResult minimize(const Objective& f, const OptimizerConfig& config,
                        const std::vector<std::vector<double>>& warm_starts) {
  config.validate();
  const std::size_t dim = config.bounds.size();
  for (const auto& w : warm_starts) {
    if (w.size() != dim) throw std::invalid_argument("optimizer: warm start has wrong dimension");
  }

  // Starting points are drawn up front so the stream does not depend on
  // how restarts are scheduled.
  std::mt19937_64 rng(config.seed);
  std::vector<Point> starts(static_cast<std::size_t>(config.restarts), Point(dim));
  for (int k = 0; k < config.restarts; ++k) {
    for (std::size_t i = 0; i < dim; ++i) {
      const auto& b = config.bounds[i];
      starts[k][i] = b.lo + (b.hi - b.lo) * unit_draw(rng);
    }
    if (static_cast<std::size_t>(k) < warm_starts.size()) starts[k] = warm_starts[k];
  }

  std::vector<OptimizeResult> runs(starts.size());
  if (config.threads <= 1) {
    for (std::size_t k = 0; k < starts.size(); ++k) runs[k] = nelder_mead(f, starts[k], config);
  } else {
    std::size_t next = 0;
    while (next < starts.size()) {
      std::vector<std::future<OptimizeResult>> batch;
      const std::size_t end = std::min(starts.size(), next + static_cast<std::size_t>(config.threads));
      for (std::size_t k = next; k < end; ++k) {
        batch.push_back(std::async(std::launch::async, [&, k] { return nelder_mead(f, starts[k], config); }));
      }
      for (std::size_t k = next; k < end; ++k) runs[k] = batch[k - next].get();
      next = end;
    }
  }

  OptimizeResult best = runs[0];
  best.best_restart = 0;
  int evaluations = runs[0].evaluations;
  for (std::size_t k = 1; k < runs.size(); ++k) {
    evaluations += runs[k].evaluations;
    if (runs[k].min < best.min) {
      best = runs[k];
      best.best_restart = static_cast<int>(k);
    }
  }
  best.evaluations = evaluations;
  return best;
}

}  // namespace cvbell::numerics
