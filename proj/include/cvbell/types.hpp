#pragma once

#include <complex>

namespace cvbell {

using Complex = std::complex<double>;

enum class Mode { A, B };

/// Which entangled thermal state is prepared.
enum class Family {
  QubitEts,  // conditional phase-space flip heralded by a measured qubit
  AltEts,    // single-mode Kerr on A, then a 50:50 mixer with vacuum B
};

/// Thermal variance V >= 1, displacement d > 0 and detector efficiency
/// 0 < eta <= 1 (intensity transmission of the loss beam splitter).
struct EtsParams {
  double V = 1.0;
  double d = 1.0;
  double eta = 1.0;

  void validate() const;
};

/// The four local angles entering one CHSH combination.
struct ChshAngles {
  double theta_a = 0.0;
  double theta_b = 0.0;
  double theta_a2 = 0.0;
  double theta_b2 = 0.0;
};

/// Measurement direction (polar theta, azimuth phi) for a Leggett setting.
struct LeggettSetting {
  double theta = 0.0;
  double phi = 0.0;

  /// theta folded into [0, pi], phi into [-pi, pi], same direction.
  LeggettSetting canonical() const;
};

/// One local measurement setting: a Bell rotation by theta, or a Leggett
/// direction (theta, phi).
struct LocalSetting {
  enum class Kind { Bell, Leggett };
  Kind kind = Kind::Bell;
  double theta = 0.0;
  double phi = 0.0;

  static LocalSetting bell(double theta) { return {Kind::Bell, theta, 0.0}; }
  static LocalSetting leggett(const LeggettSetting& s) { return {Kind::Leggett, s.theta, s.phi}; }
};

}  // namespace cvbell
