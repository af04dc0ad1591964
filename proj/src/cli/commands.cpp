#include "cvbell/cli/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "cvbell/thermal/ensemble.hpp"

namespace cvbell::cli {
namespace {

constexpr double kPi = std::numbers::pi;

nlohmann::json range_json(const Range& r) {
  return {{"text", r.text}, {"lo", r.lo}, {"hi", r.hi}, {"count", r.count}, {"log", r.log}};
}

std::string family_name(Family f) { return f == Family::QubitEts ? "qubit" : "alt"; }

std::string scheme_name(thermal::Scheme s) { return s == thermal::Scheme::Moment ? "moment" : "quadrature"; }

void check_params(const SweepConfig& c) {
  for (double V : c.V.values()) {
    for (double d : c.d.values()) {
      for (double eta : c.eta.values()) {
        try {
          EtsParams{V, d, eta}.validate();
        } catch (const std::invalid_argument& e) {
          throw ConfigError(e.what());
        }
      }
    }
  }
}

inequalities::Backend backend_of(const SweepConfig& c) {
  if (c.backend == "analytic") return inequalities::Backend::analytic();
  return inequalities::Backend::ensemble_of(c.family, c.ensemble);
}

inequalities::LeggettOptions leggett_options(const SweepConfig& c) {
  inequalities::LeggettOptions o;
  o.backend = inequalities::Backend::ensemble_of(c.family, c.ensemble);
  o.mirror_bob_azimuth = c.mirror_bob_azimuth;
  o.sine_coefficient = c.sine_coefficient;
  return o;
}

struct GridPoint {
  double V, d, eta;
};

// V outermost, d innermost, so a Leggett d-scan is contiguous.
std::vector<GridPoint> grid(const SweepConfig& c) {
  std::vector<GridPoint> g;
  for (double V : c.V.values()) {
    for (double eta : c.eta.values()) {
      for (double d : c.d.values()) g.push_back({V, d, eta});
    }
  }
  return g;
}

std::string error_status(const std::exception& e) { return std::string("error: ") + e.what(); }

nlohmann::json windows_json(const std::vector<inequalities::Window>& w) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& x : w) out.push_back({x.lo, x.hi});
  return out;
}

}  // namespace

void SweepConfig::validate() const {
  if (backend != "analytic" && backend != "ensemble") {
    throw ConfigError("backend must be 'analytic' or 'ensemble'");
  }
  if (backend == "analytic" && family != Family::QubitEts) {
    throw ConfigError("the analytic backend covers the qubit family only; use --backend ensemble");
  }
  if (ensemble.order < 2 || ensemble.order > 64) throw ConfigError("order must be in [2, 64]");
  if (!(ensemble.convergence_tolerance > 0.0)) throw ConfigError("convergence tolerance must be positive");
  try {
    optimizer.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(phi > 0.0 && phi < kPi)) throw ConfigError("phi must lie in (0, pi)");
  if (!std::isfinite(sine_coefficient)) throw ConfigError("sine coefficient must be finite");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  check_params(*this);
}

nlohmann::json SweepConfig::to_json() const {
  return {
      {"V", range_json(V)},
      {"d", range_json(d)},
      {"eta", range_json(eta)},
      {"family", family_name(family)},
      {"backend", backend},
      {"ensemble",
       {{"scheme", scheme_name(ensemble.scheme)},
        {"order", ensemble.order},
        {"check_convergence", ensemble.check_convergence},
        {"convergence_tolerance", ensemble.convergence_tolerance}}},
      {"optimizer",
       {{"restarts", optimizer.restarts},
        {"max_iters", optimizer.max_iters},
        {"tolerance", optimizer.tolerance},
        {"seed", optimizer.seed},
        {"bounds", {-kPi, kPi}},
        {"warm_starts", "qubit pattern (x, -x, -3x, 3x), x = pi/16, and its mirror"}}},
      {"leggett",
       {{"phi", phi},
        {"optimize_phi", optimize_phi},
        {"sine_coefficient", sine_coefficient},
        {"mirror_bob_azimuth", mirror_bob_azimuth}}},
  };
}

void EntropyConfig::validate() const {
  if (samples < 10000 || samples > 100000000) throw ConfigError("samples must be in [1e4, 1e8]");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  for (double v : V.values()) {
    for (double x : d.values()) {
      try {
        EtsParams{v, x, 1.0}.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
  }
}

nlohmann::json EntropyConfig::to_json() const {
  return {{"V", range_json(V)}, {"d", range_json(d)}, {"samples", samples}, {"seed", seed}};
}

int default_threads() {
  if (const char* env = std::getenv("CVBELL_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0 && n <= 1024) return static_cast<int>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  std::atomic<int> next{0};
  std::mutex mu;
  int failed_at = n;
  std::exception_ptr failure;
  auto work = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  };
  const int k = std::max(1, std::min(threads, n));
  std::vector<std::thread> pool;
  for (int t = 1; t < k; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<ChshAngles> chsh_warm_starts() {
  const double x = kPi / 16;
  return {{x, -x, -3 * x, 3 * x}, {-x, x, 3 * x, -3 * x}};
}

BellCell bell_cell(const EtsParams& params, const SweepConfig& config) {
  BellCell cell{params, {}, "ok"};
  try {
    numerics::OptimizerConfig opt = config.optimizer;
    opt.threads = 1;
    if (config.family == Family::QubitEts) {
      cell.result = inequalities::chsh_max(params, backend_of(config), opt, chsh_warm_starts());
    } else {
      // The qubit optimum is a good starting point and costs almost nothing.
      const auto seed = inequalities::chsh_max(params, inequalities::Backend::analytic(),
                                               inequalities::default_chsh_config(), chsh_warm_starts());
      cell.result = inequalities::chsh_max(params, backend_of(config), opt, {seed.angles});
    }
    if (!cell.result.converged) cell.status = "nonconverged";
  } catch (const std::exception& e) {
    cell.result.b_max = std::nan("");
    cell.status = error_status(e);
  }
  return cell;
}

Table bell_surface(const SweepConfig& config, const std::string& command, int* nonconverged) {
  config.validate();
  const auto points = grid(config);
  std::vector<BellCell> cells(points.size());
  parallel_for(static_cast<int>(points.size()), config.threads, [&](int i) {
    const GridPoint& p = points[i];
    cells[i] = bell_cell({p.V, p.d, p.eta}, config);
  });

  Table t;
  t.command = command;
  t.config = config.to_json();
  t.seed = config.optimizer.seed;
  t.columns = {{"V", ""},         {"d", ""},           {"eta", ""},          {"B_max", ""},
               {"theta_A", "rad"}, {"theta_B", "rad"}, {"theta_A2", "rad"}, {"theta_B2", "rad"},
               {"backend", ""},   {"family", ""},      {"converged", ""},    {"status", ""}};
  int bad = 0;
  for (const BellCell& c : cells) {
    const bool ok = c.status == "ok";
    bad += !ok;
    const ChshAngles& a = c.result.angles;
    t.rows.push_back({c.params.V, c.params.d, c.params.eta, c.result.b_max, a.theta_a, a.theta_b, a.theta_a2,
                      a.theta_b2, config.backend, family_name(config.family), ok, c.status});
  }
  t.extra["nonconverged_cells"] = bad;
  if (nonconverged) *nonconverged = bad;
  return t;
}

Table leggett_scan(const SweepConfig& config, const std::string& command, int* nonconverged) {
  config.validate();
  const auto points = grid(config);
  const auto lopt = leggett_options(config);

  struct Row {
    BellCell bell;
    double l_fixed = std::nan("");
    inequalities::LeggettMax l_opt{std::nan(""), std::nan(""), false};
    std::string status = "ok";
  };
  std::vector<Row> rows(points.size());
  parallel_for(static_cast<int>(points.size()), config.threads, [&](int i) {
    const GridPoint& p = points[i];
    const EtsParams params{p.V, p.d, p.eta};
    Row& r = rows[i];
    r.bell = bell_cell(params, config);
    r.status = r.bell.status;
    try {
      r.l_fixed = inequalities::leggett_script(params, config.phi, lopt);
      if (config.optimize_phi) {
        numerics::OptimizerConfig c;
        c.restarts = 3;
        c.tolerance = 1e-6;
        c.seed = config.optimizer.seed;
        r.l_opt = inequalities::leggett_script_max(params, true, lopt, &c);
        if (!r.l_opt.converged && r.status == "ok") r.status = "nonconverged";
      }
    } catch (const std::exception& e) {
      r.status = error_status(e);
    }
  });

  Table t;
  t.command = command;
  t.config = config.to_json();
  t.seed = config.optimizer.seed;
  t.columns = {{"V", ""},       {"d", ""},           {"eta", ""},     {"B_max", ""},
               {"L_script", ""}, {"phi_used", "rad"}, {"L_script_opt", ""}, {"phi_opt", "rad"},
               {"converged", ""}, {"status", ""}};
  int bad = 0;
  for (const Row& r : rows) {
    const bool ok = r.status == "ok";
    bad += !ok;
    const EtsParams& p = r.bell.params;
    t.rows.push_back({p.V, p.d, p.eta, r.bell.result.b_max, r.l_fixed, config.phi, r.l_opt.value, r.l_opt.phi,
                      ok, r.status});
  }

  // Coexistence windows (B > 2 and L <= 0) along d for each (V, eta) line.
  nlohmann::json windows = nlohmann::json::array();
  const std::size_t nd = config.d.values().size();
  for (std::size_t start = 0; start < rows.size(); start += nd) {
    std::vector<double> d, b, lf, lo;
    for (std::size_t k = start; k < start + nd; ++k) {
      d.push_back(rows[k].bell.params.d);
      b.push_back(rows[k].bell.result.b_max);
      lf.push_back(rows[k].l_fixed);
      lo.push_back(rows[k].l_opt.value);
    }
    nlohmann::json w = {{"V", rows[start].bell.params.V},
                        {"eta", rows[start].bell.params.eta},
                        {"fixed_phi", windows_json(inequalities::coexistence_windows(d, b, lf))}};
    if (config.optimize_phi) w["optimized_phi"] = windows_json(inequalities::coexistence_windows(d, b, lo));
    windows.push_back(w);
  }
  t.extra["coexistence_windows"] = windows;
  t.extra["nonconverged_cells"] = bad;
  if (nonconverged) *nonconverged = bad;
  return t;
}

Table entropy_table(const EntropyConfig& config) {
  config.validate();
  std::vector<std::pair<double, double>> points;
  for (double V : config.V.values()) {
    for (double d : config.d.values()) points.emplace_back(V, d);
  }
  std::vector<thermal::EntropyEstimate> est(points.size());
  parallel_for(static_cast<int>(points.size()), config.threads, [&](int i) {
    est[i] = thermal::linear_entropy(points[i].first, points[i].second, config.samples, config.seed);
  });
  Table t;
  t.command = "entropy";
  t.config = config.to_json();
  t.seed = config.seed;
  t.columns = {{"V", ""}, {"d", ""}, {"S_linear", ""}, {"std_error", ""}, {"samples", ""}, {"seed", ""}};
  for (std::size_t i = 0; i < points.size(); ++i) {
    t.rows.push_back({points[i].first, points[i].second, est[i].value, est[i].std_error,
                      static_cast<long long>(est[i].samples), static_cast<long long>(est[i].seed)});
  }
  return t;
}

}  // namespace cvbell::cli
