#pragma once

#include "micromacro/density.hpp"

namespace micromacro {

// Two-mode parametric amplifier U = exp(g (a+_H a+_V - a_H a_V)), g = chi * t.
struct GainParams {
  double g = 0.0;

  static GainParams from_coupling(double chi, double t) { return {chi * t}; }

  double Gamma() const { return std::tanh(g); }
  double C() const { return std::cosh(g); }
  double S() const { return std::sinh(g); }
  void validate() const;
};

// gamma_ij = (Gamma/2)^i (-Gamma/2)^j e^{-i(i+j)phi} sqrt((2i+1)! (2j)!) / (i! j!),
// evaluated through log-factorials. The amplitude of |2i+1, 2j> in |Phi^phi> is gamma_ij / C^2.
cplx gamma_ij(int i, int j, double phi, const GainParams& gain);

// Gamma^n sqrt(n+1) / C^2: amplitude of |n+1, n> in the amplified |H> (and of
// |n, n+1> in the amplified |V>).
double hv_amplified_coefficient(int n, const GainParams& gain);

// 1 + 4 sinh^2 g: mean photon number of an amplified single photon.
double mean_photon_number(const GainParams& gain);

// Probability that an amplified single photon holds more than n_max photons in total.
double macro_qubit_tail_mass(const GainParams& gain, int n_max);
// Same for the amplified vacuum.
double amplified_vacuum_tail_mass(const GainParams& gain, int n_max);

// Smallest total-photon cutoff leaving at most `tail_tolerance` of the
// macro-qubit outside the truncation.
int required_cutoff(const GainParams& gain, double tail_tolerance, int limit = 4000);

struct MacroQubit {
  double injected_phase = 0.0;
  GainParams gain;
  TwoModeVector state;  // in the {pi_phi, pi_phi_perp} basis, truncated but not renormalized
  double tail_mass = 0.0;
};

// |Phi^phi>: the amplified image of the equatorial photon pi_phi.
MacroQubit macro_qubit(double phi, const GainParams& gain, const Cutoff& cutoff);

// Amplified |H> (a = 0) or |V> (a = 1) written in the H/V basis and renormalized
// after truncation.
TwoModeVector hv_macro_qubit(int a, const GainParams& gain, const Cutoff& cutoff);
// U|0,0> = (1/C) sum_n Gamma^n |n, n>, renormalized after truncation.
TwoModeVector amplified_vacuum(const GainParams& gain, const Cutoff& cutoff);

struct MicroMacroState {
  double phase = 0.0;
  GainParams gain;
  QubitModeVector state;  // normalized, B in H/V
  double tail_mass = 0.0;

  BranchEnsemble ensemble() const;
  DensityOperator density() const;
};

// (|phi>_A |Phi^{phi_perp}>_B - |phi_perp>_A |Phi^phi>_B) / sqrt 2.
MicroMacroState micro_macro_state(double phi, const GainParams& gain, const Cutoff& cutoff);

// Applies U on B to a state whose field carries at most one photon, mapping
// |0,0>, |1,0>, |0,1> to their renormalized amplified images.
BranchEnsemble amplify(const BranchEnsemble& input, const GainParams& gain,
                       const Cutoff& cutoff);

}  // namespace micromacro
