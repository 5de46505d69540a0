#pragma once

#include "micromacro/amplifier.hpp"

namespace micromacro {

// Transmittivity eta of the lossy channel on the macro arm; R = 1 - eta.
struct LossParams {
  double eta = 1.0;

  static LossParams from_R(double r) { return {1.0 - r}; }
  double R() const { return 1.0 - eta; }
  void validate() const;
};

struct InjectionParams {
  double p = 1.0;
  void validate() const;
};

// sqrt(C(n, lost) eta^(n - lost) (1 - eta)^lost): amplitude for a mode holding
// n photons to lose exactly `lost` of them.
double loss_amplitude(int n, int lost, double eta);

// Kraus operator removing p photons from the first mode and q from the second.
ModeOperator loss_kraus(int cutoff, int p, int q, double eta);

// The channel acts on both polarization modes of the field with the same eta
// and leaves qubit A untouched. It commutes with every polarization rotation.
DensityOperator lossy_channel(const TwoModeVector& state, const LossParams& loss);
DensityOperator lossy_channel(const DensityOperator& rho, const LossParams& loss);
// Branches of weight below `drop` times the input trace are discarded.
BranchEnsemble lossy_channel(const BranchEnsemble& rho, const LossParams& loss,
                             double drop = 1e-24);
// Photon-number statistics only: each mode goes through the binomial kernel.
PhotonDistribution lossy_channel(const PhotonDistribution& dist, const LossParams& loss);

// Projects the field onto its one-photon sector and renormalizes. The result is
// the 4x4 qubit-pair state in the order HH, HV, VH, VV (A first).
DensityOperator condition_on_single_photon(const BranchEnsemble& rho);
double single_photon_probability(const BranchEnsemble& rho);

// Amplified singlet -> loss on B -> exactly one surviving photon.
DensityOperator attenuate_to_single_photon(const MicroMacroState& joint, const LossParams& loss);

// p |psi-><psi-| + (1 - p) I_A/2 (x) |0><0|_B before amplification (cutoff 1).
DensityOperator mixed_injection_state(const InjectionParams& injection);
BranchEnsemble mixed_injection_ensemble(const InjectionParams& injection);

// Numeric pipeline for imperfect injection: amplify, lose, condition.
DensityOperator simulate_attenuated_state(const InjectionParams& injection,
                                          const GainParams& gain, const LossParams& loss,
                                          const Cutoff& cutoff);

// Closed forms of the conditioned state with t = (1 - eta) Gamma.
double attenuation_parameter(const GainParams& gain, const LossParams& loss);
cmatrix4 single_photon_state(double t);
// Weighted sum of the singlet-branch and vacuum-branch matrices, normalized by
// its trace.
DensityOperator attenuated_state_with_injection(const InjectionParams& injection,
                                                const GainParams& gain,
                                                const LossParams& loss);

}  // namespace micromacro
