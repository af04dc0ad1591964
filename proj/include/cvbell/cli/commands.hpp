#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <optional>
#include <string>
#include <vector>

#include "cvbell/cli/output.hpp"
#include "cvbell/cli/range.hpp"
#include "cvbell/inequalities/inequalities.hpp"

namespace cvbell::cli {

/// Everything a grid command needs. Defaults here are the CLI defaults.
struct SweepConfig {
  Range V = parse_range("1");
  Range d = parse_range("1");
  Range eta = parse_range("1");
  Family family = Family::QubitEts;
  /// "analytic" (closed form, qubit family only) or "ensemble".
  std::string backend = "analytic";
  thermal::EnsembleOptions ensemble;
  /// Flat small-d landscapes need well over 400 iterations per restart.
  numerics::OptimizerConfig optimizer = [] {
    auto c = inequalities::default_chsh_config();
    c.max_iters = 2000;
    return c;
  }();
  /// Leggett scan: fixed azimuth, and whether to also optimise over it.
  double phi = inequalities::kLeggettPhi;
  bool optimize_phi = true;
  double sine_coefficient = 2.0;
  bool mirror_bob_azimuth = true;
  int threads = 1;  // never part of the output

  /// Throws ConfigError on anything invalid, before any computation.
  void validate() const;
  nlohmann::json to_json() const;
};

struct EntropyConfig {
  Range V = parse_range("1000");
  Range d = parse_range("3");
  int samples = 100000;
  std::uint64_t seed = 1;
  int threads = 1;

  void validate() const;
  nlohmann::json to_json() const;
};

/// Default worker count: $CVBELL_THREADS if set and positive, else the
/// hardware concurrency.
int default_threads();

/// Runs fn(i) for i in [0, n) on `threads` workers. Exceptions propagate
/// after all workers stop (the lowest index wins).
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

/// Angle quadruples tried first by every CHSH optimisation.
std::vector<ChshAngles> chsh_warm_starts();

struct BellCell {
  EtsParams params;
  inequalities::ChshMax result;
  std::string status;  // "ok", "nonconverged" or "error: ..."
};

/// Optimised |B| for one parameter point under the configured family and
/// backend. The alternative family is warm-started from the qubit optimum.
BellCell bell_cell(const EtsParams& params, const SweepConfig& config);

/// Result tables; `nonconverged` receives the number of flagged cells.
Table bell_surface(const SweepConfig& config, const std::string& command, int* nonconverged);
Table leggett_scan(const SweepConfig& config, const std::string& command, int* nonconverged);
Table entropy_table(const EntropyConfig& config);

/// Preset grids for the figure subcommand.
struct FigurePreset {
  std::string id;
  std::string command;  // "bell-surface" or "leggett-scan"
  std::string description;
  SweepConfig config;
};

std::vector<std::string> figure_ids();
FigurePreset figure_preset(const std::string& id);

/// One line of the validation report.
struct Check {
  std::string name;
  double error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// "quick" or "full". Every check is printed to `log` as it completes.
std::vector<Check> run_validation(const std::string& suite, std::ostream& log);

}  // namespace cvbell::cli
