#include "cvbell/cli/app.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cvbell/cli/commands.hpp"

namespace cvbell::cli {
namespace {

constexpr const char* kRangeHelp =
    "value or range lo:hi:count, geometric with (log), e.g. 1:1000(log):15";

// Raw strings as typed; turned into a SweepConfig after parsing.
struct SweepArgs {
  std::string V = "1", d = "1", eta = "1";
  std::string family = "qubit", backend, scheme = "moment";
  int order = 12;
  double quad_tol = 1e-4;
  int restarts = 4, max_iters = 2000;
  double tol = 1e-8;
  std::uint64_t seed = 1;
  double phi = inequalities::kLeggettPhi;
  bool fixed_phi_only = false;
  double sine_coefficient = 2.0;
  bool no_mirror = false;
};

struct OutputArgs {
  std::string path = "-";
  std::string format = "csv";
  int threads = default_threads();
};

void add_output(CLI::App* app, OutputArgs& o) {
  app->add_option("-o,--output", o.path, "output file, - for stdout")->capture_default_str();
  app->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app->add_option("--threads", o.threads, "worker threads (default $CVBELL_THREADS or all cores)")
      ->check(CLI::Range(1, 1024));
}

void add_sweep(CLI::App* app, SweepArgs& a, bool leggett) {
  app->add_option("--v", a.V, std::string("thermal variance V >= 1; ") + kRangeHelp)->capture_default_str();
  app->add_option("--d", a.d, std::string("displacement d > 0; ") + kRangeHelp)->capture_default_str();
  app->add_option("--eta", a.eta, std::string("detector efficiency in (0, 1]; ") + kRangeHelp)
      ->capture_default_str();
  app->add_option("--family", a.family, "qubit or alt")
      ->check(CLI::IsMember({"qubit", "alt"}))
      ->capture_default_str();
  app->add_option("--backend", a.backend, "analytic (qubit only) or ensemble; default analytic for qubit")
      ->check(CLI::IsMember({"analytic", "ensemble"}));
  app->add_option("--scheme", a.scheme, "ensemble P-average: moment or quadrature")
      ->check(CLI::IsMember({"moment", "quadrature"}))
      ->capture_default_str();
  app->add_option("--order", a.order, "quadrature points per axis")->capture_default_str();
  app->add_option("--quad-tol", a.quad_tol, "quadrature order-doubling tolerance")->capture_default_str();
  app->add_option("--restarts", a.restarts, "optimizer restarts per cell")->capture_default_str();
  app->add_option("--max-iters", a.max_iters, "Nelder-Mead iterations per restart")->capture_default_str();
  app->add_option("--tol", a.tol, "simplex diameter at convergence")->capture_default_str();
  app->add_option("--seed", a.seed, "optimizer seed")->capture_default_str();
  if (leggett) {
    app->add_option("--phi", a.phi, "fixed Leggett azimuth")->capture_default_str();
    app->add_flag("--fixed-phi-only", a.fixed_phi_only, "skip the optimisation over phi");
    app->add_option("--sine-coefficient", a.sine_coefficient, "c in L - 8 + c|sin(phi/2)|")
        ->capture_default_str();
    app->add_flag("--no-mirror", a.no_mirror, "use Bob's azimuth unmirrored");
  }
}

SweepConfig resolve(const SweepArgs& a, int threads) {
  SweepConfig c;
  c.V = parse_range(a.V);
  c.d = parse_range(a.d);
  c.eta = parse_range(a.eta);
  c.family = a.family == "alt" ? Family::AltEts : Family::QubitEts;
  c.backend = !a.backend.empty() ? a.backend : (c.family == Family::QubitEts ? "analytic" : "ensemble");
  c.ensemble.scheme = a.scheme == "quadrature" ? thermal::Scheme::Quadrature : thermal::Scheme::Moment;
  c.ensemble.order = a.order;
  c.ensemble.convergence_tolerance = a.quad_tol;
  c.optimizer.restarts = a.restarts;
  c.optimizer.max_iters = a.max_iters;
  c.optimizer.tolerance = a.tol;
  c.optimizer.seed = a.seed;
  c.phi = a.phi;
  c.optimize_phi = !a.fixed_phi_only;
  c.sine_coefficient = a.sine_coefficient;
  c.mirror_bob_azimuth = !a.no_mirror;
  c.threads = threads;
  c.validate();
  return c;
}

void emit(const Table& t, const OutputArgs& o) {
  std::ostringstream buf;
  if (o.format == "json") {
    write_json(t, buf);
  } else {
    write_csv(t, buf);
  }
  if (o.path == "-") {
    std::cout << buf.str() << std::flush;
    return;
  }
  std::ofstream f(o.path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file '" + o.path + "'");
  f << buf.str();
}

int finish(const Table& t, const OutputArgs& o, int nonconverged) {
  emit(t, o);
  if (nonconverged > 0) {
    std::cerr << nonconverged << " cell(s) flagged as not converged\n";
    return kNonConverged;
  }
  return kOk;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Bell-CHSH and Leggett tests for entangled thermal states under coarse-grained homodyne detection"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);

  SweepArgs surface_args, max_args, leggett_args;
  OutputArgs surface_out, max_out, leggett_out, entropy_out, figure_out;

  auto* surface = app.add_subcommand("bell-surface", "optimised |B| over a (V, d, eta) grid");
  add_sweep(surface, surface_args, false);
  add_output(surface, surface_out);

  auto* bmax = app.add_subcommand("bell-max", "optimised |B| and angles at one (V, d, eta)");
  max_args.restarts = 16;
  add_sweep(bmax, max_args, false);
  add_output(bmax, max_out);

  auto* leggett = app.add_subcommand("leggett-scan", "|B|_max and the Leggett function over a grid");
  add_sweep(leggett, leggett_args, true);
  add_output(leggett, leggett_out);

  std::string ent_V = "1000", ent_d = "3";
  int ent_samples = 100000;
  std::uint64_t ent_seed = 1;
  auto* entropy = app.add_subcommand("entropy", "linear entropy 1 - Tr rho^2 by Monte Carlo");
  entropy->add_option("--v", ent_V, kRangeHelp)->capture_default_str();
  entropy->add_option("--d", ent_d, kRangeHelp)->capture_default_str();
  entropy->add_option("--samples", ent_samples, "sample pairs (>= 1e4)")->capture_default_str();
  entropy->add_option("--seed", ent_seed, "Monte Carlo seed")->capture_default_str();
  add_output(entropy, entropy_out);

  std::string suite = "quick";
  auto* validate = app.add_subcommand("validate", "cross-backend agreement and invariant checks");
  validate->add_option("--suite", suite, "quick or full")
      ->check(CLI::IsMember({"quick", "full"}))
      ->capture_default_str();

  std::string figure_id;
  auto* figure = app.add_subcommand("figure", "preset grids 1a..1c (Bell surfaces) and 2a..2d (Leggett scans)");
  figure->add_option("--id", figure_id, "1a, 1b, 1c, 2a, 2b, 2c or 2d")
      ->required()
      ->check(CLI::IsMember(figure_ids()));
  add_output(figure, figure_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*surface) {
      int bad = 0;
      const Table t = bell_surface(resolve(surface_args, surface_out.threads), "bell-surface", &bad);
      return finish(t, surface_out, bad);
    }
    if (*bmax) {
      const SweepConfig c = resolve(max_args, max_out.threads);
      if (c.V.count != 1 || c.d.count != 1 || c.eta.count != 1) {
        throw ConfigError("bell-max takes single values; use bell-surface for grids");
      }
      int bad = 0;
      const Table t = bell_surface(c, "bell-max", &bad);
      return finish(t, max_out, bad);
    }
    if (*leggett) {
      int bad = 0;
      const Table t = leggett_scan(resolve(leggett_args, leggett_out.threads), "leggett-scan", &bad);
      return finish(t, leggett_out, bad);
    }
    if (*entropy) {
      EntropyConfig c;
      c.V = parse_range(ent_V);
      c.d = parse_range(ent_d);
      c.samples = ent_samples;
      c.seed = ent_seed;
      c.threads = entropy_out.threads;
      return finish(entropy_table(c), entropy_out, 0);
    }
    if (*validate) {
      const auto checks = run_validation(suite, std::cout);
      int failed = 0;
      for (const Check& c : checks) failed += !c.pass;
      std::cout << checks.size() - failed << "/" << checks.size() << " checks passed\n";
      return failed ? kValidationFailure : kOk;
    }
    if (*figure) {
      FigurePreset p = figure_preset(figure_id);
      p.config.threads = figure_out.threads;
      int bad = 0;
      const std::string command = "figure " + p.id + " (" + p.command + ")";
      Table t = p.command == "bell-surface" ? bell_surface(p.config, command, &bad)
                                            : leggett_scan(p.config, command, &bad);
      t.extra["description"] = p.description;
      return finish(t, figure_out, bad);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace cvbell::cli
