#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "cvbell/types.hpp"

namespace cvbell::coherent {

/// One term  coeff |ket_a, ket_b><bra_a, bra_b|  of a two-mode operator
/// written in coherent states.
struct Dyad {
  Complex coeff{1.0, 0.0};
  Complex ket_a{}, ket_b{};
  Complex bra_a{}, bra_b{};
};

inline constexpr double kDefaultLabelCap = 1e3;

/// A (generally mixed, unnormalised) two-mode operator held as a list of
/// coherent-state dyads. Every transformation below returns a new operator.
class CoherentOperator {
 public:
  CoherentOperator() = default;
  explicit CoherentOperator(std::vector<Dyad> dyads, double label_cap = kDefaultLabelCap);

  const std::vector<Dyad>& dyads() const { return dyads_; }
  std::size_t size() const { return dyads_.size(); }
  double label_cap() const { return label_cap_; }

  /// sum_k coeff_k <bra_a|ket_a><bra_b|ket_b>
  Complex trace() const;
  /// sum_k |coeff_k|, the scale against which residues are judged.
  double coefficient_mass() const;

 private:
  std::vector<Dyad> dyads_;
  double label_cap_ = kDefaultLabelCap;
};

/// <bra|ket> for coherent states.
Complex overlap(Complex bra, Complex ket);

/// <bra| sign(x) |ket> with x = (a + a^dagger)/sqrt(2).
Complex sign_element(Complex bra, Complex ket);

/// 1/2 (|a,b> + |-a,-b>)(<a,b| + <-a,-b|): the branch kept after the qubit
/// is found in (|0> + |1>)/sqrt(2). Trace is 1 + Re(<a|-a><b|-b>).
CoherentOperator ets_branch(Complex alpha, Complex beta);

/// Kerr on |alpha>_A, 50:50 mixing with vacuum B, then D_A(i pi / 8d).
CoherentOperator alt_branch(Complex alpha, double d);
/// Same construction with an arbitrary final displacement of mode A.
CoherentOperator alt_branch_displaced(Complex alpha, Complex zeta);

/// The pure alternative branch before the phase-fixing displacement.
CoherentOperator alt_branch_unfixed(Complex alpha);

CoherentOperator displace(const CoherentOperator& op, Mode mode, Complex zeta);

/// |g> -> e^{-i pi/4} (|g> + i |-g>) / sqrt(2) on the chosen mode.
CoherentOperator kerr(const CoherentOperator& op, Mode mode);

/// (g_A, g_B) -> (t g_A + r g_B, -r g_A + t g_B), r = sqrt(1 - t^2).
CoherentOperator beamsplit(const CoherentOperator& op, double transmission_amplitude);

/// Photon loss with intensity transmission eta, ancilla traced out.
CoherentOperator loss(const CoherentOperator& op, Mode mode, double eta);

/// Unnormalised moments Tr[rho], Tr[rho S_A], Tr[rho S_B], Tr[rho S_A S_B]
/// after loss eta on both modes.
struct SignMoments {
  Complex trace = 0.0;
  Complex sa = 0.0;
  Complex sb = 0.0;
  Complex sab = 0.0;
};

SignMoments sign_moments(const CoherentOperator& op, double eta);

/// Tr[rho (S x S)] after loss eta on both modes, normalised by the trace.
double correlation(const CoherentOperator& op, double eta);

struct JointProbabilities {
  double pp = 0.0;  // P(+,+)
  double pm = 0.0;  // P(+,-)
  double mp = 0.0;  // P(-,+)
  double mm = 0.0;  // P(-,-)

  double correlation() const { return pp + mm - pm - mp; }
  double total() const { return pp + pm + mp + mm; }
};

JointProbabilities joint_probs(const CoherentOperator& op, double eta);

/// U_NL D(i theta / 2d) U_NL on one mode.
CoherentOperator apply_bell_setting(const CoherentOperator& op, double theta, Mode mode, double d);

/// D(-i phi/4d) U_NL D(i theta/4d) U_NL D(i phi/4d) on one mode.
CoherentOperator apply_leggett_setting(const CoherentOperator& op, const LeggettSetting& setting, Mode mode,
                                       double d);

/// Dispatches to apply_bell_setting or apply_leggett_setting.
CoherentOperator apply_setting(const CoherentOperator& op, const LocalSetting& setting, Mode mode, double d);

/// 2x2 matrix, row-major.
using QubitMap = std::array<Complex, 4>;

/// M_ij = <s_i d| U |s_j d> with s = (+, -) and U the setting's single-mode
/// unitary, fixed up to a global phase (the largest entry is made real and
/// positive). Only meaningful for d >= 2, where |d> and |-d> are orthogonal up
/// to e^{-2 d^2}. Norm lost from the span shows up as Tr(M^+ M) < 2.
QubitMap projected_setting(const LocalSetting& setting, double d);

/// R(theta, phi) = [[sin(theta/2), e^{i phi} cos(theta/2)], [e^{-i phi} cos(theta/2), -sin(theta/2)]]
/// applied to the basis vector (|d>, |-d>)^T, written in the same coefficient
/// form as projected_setting, i.e. the transpose of R.
QubitMap ideal_rotation(double theta, double phi);

/// |Tr(R^+ M)|^2 / (2 Tr(M^+ M)): 1 iff M is proportional to the unitary R.
double map_fidelity(const QubitMap& m, const QubitMap& r);

inline constexpr double kDefaultPruneTolerance = 1e-14;

/// Merges dyads whose four labels agree within 1e-12, then drops the smallest
/// dyads (with their adjoint partners) while the dropped coefficient mass stays
/// below tol * |trace|.
CoherentOperator prune(const CoherentOperator& op, double tol = kDefaultPruneTolerance);

/// True if the dyad list equals its own adjoint after canonicalisation.
bool is_hermitian(const CoherentOperator& op, double tol = 1e-10);

/// Conjugate-transposed operator.
CoherentOperator adjoint(const CoherentOperator& op);

}  // namespace cvbell::coherent
