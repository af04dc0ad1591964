#include "cvbell/cli/commands.hpp"

// Grids behind the figure subcommand. Ranges and resolutions are our choice,
// picked to bracket the features each surface is meant to show:
//
//   1a  qubit, V = 1000, B_max over (d, eta). The violation region fills the
//       large-d side almost uniformly in eta; at V = 1000 B_max only leaves
//       the classical regime above d ~ 20, so d runs to 400 on a log axis.
//   1b  qubit, eta = 0.05, B_max over (V, d) with V from the pure state to 1000.
//   1c  alternative family, same axes as 1b on a reduced grid. Each cell costs
//       seconds (numerical P-average), so restarts and iterations are cut and
//       every cell starts from the qubit optimum of the same point.
//   2a  V = 1,    eta = 1,    d-scan of B_max and L_script.
//   2b  V = 1000, eta = 1,    d-scan.
//   2c  V = 1,    eta = 0.03, d-scan.
//   2d  V = 700,  eta = 0.05, d-scan.

namespace cvbell::cli {

std::vector<std::string> figure_ids() { return {"1a", "1b", "1c", "2a", "2b", "2c", "2d"}; }

FigurePreset figure_preset(const std::string& id) {
  FigurePreset p;
  p.id = id;
  SweepConfig& c = p.config;
  c.optimizer.restarts = 4;
  if (id == "1a") {
    p.command = "bell-surface";
    p.description = "B_max(d, eta) at V = 1000, qubit family";
    c.V = parse_range("1000");
    c.d = parse_range("1:400(log):24");
    c.eta = parse_range("0.05:1:8");
  } else if (id == "1b") {
    p.command = "bell-surface";
    p.description = "B_max(V, d) at eta = 0.05, qubit family";
    c.V = parse_range("1:1000(log):10");
    c.d = parse_range("0.1:400(log):24");
    c.eta = parse_range("0.05");
  } else if (id == "1c") {
    p.command = "bell-surface";
    p.description = "B_max(V, d) at eta = 0.05, alternative family (reduced grid)";
    c.family = Family::AltEts;
    c.backend = "ensemble";
    c.V = parse_range("1:1000(log):4");
    c.d = parse_range("0.5:400(log):8");
    c.eta = parse_range("0.05");
    c.optimizer.restarts = 1;
    c.optimizer.max_iters = 150;
    c.optimizer.tolerance = 1e-4;
  } else if (id == "2a") {
    p.command = "leggett-scan";
    p.description = "B_max and L_script along d at V = 1, eta = 1";
    c.V = parse_range("1");
    c.d = parse_range("0.2:20(log):30");
    c.eta = parse_range("1");
  } else if (id == "2b") {
    p.command = "leggett-scan";
    p.description = "B_max and L_script along d at V = 1000, eta = 1";
    c.V = parse_range("1000");
    c.d = parse_range("5:2000(log):30");
    c.eta = parse_range("1");
  } else if (id == "2c") {
    p.command = "leggett-scan";
    p.description = "B_max and L_script along d at V = 1, eta = 0.03";
    c.V = parse_range("1");
    c.d = parse_range("0.5:50(log):30");
    c.eta = parse_range("0.03");
  } else if (id == "2d") {
    p.command = "leggett-scan";
    p.description = "B_max and L_script along d at V = 700, eta = 0.05";
    c.V = parse_range("700");
    c.d = parse_range("5:2000(log):30");
    c.eta = parse_range("0.05");
  } else {
    throw ConfigError("unknown figure id '" + id + "'");
  }
  return p;
}

}  // namespace cvbell::cli
