#pragma once

#include <array>
#include <optional>
#include <string>

#include "micromacro/measurement.hpp"

namespace micromacro {

enum class Criterion {
  MicroMicro,             // sum_i <s_i (x) s_i> <= 1
  PseudoPauli,            // sum_i <s_i (x) Sigma_i> <= 1
  GeneralizedDichotomic,  // same correlations against sqrt 3
  OFilter,                // sum_i <s_i (x) Pi_i(k)>, not a witness on its own
  SimonSpin,              // |<s . J>| - <N> <= 0
};

std::string to_string(Criterion c);

struct WitnessParameters {
  std::optional<double> g;
  std::optional<double> eta;
  std::optional<int> k;
  std::optional<double> p;
};

struct WitnessReport {
  Criterion criterion = Criterion::MicroMicro;
  // Sum of |terms|, except SimonSpin: |sum of terms| - mean_photon_number.
  double value = 0.0;
  double bound = 1.0;
  // Signed correlations <s_i (x) X_i> for i = 1, 2, 3.
  std::array<double, 3> terms{};
  // OFilter only: each term divided by the probability of a conclusive outcome.
  std::optional<std::array<double, 3>> conclusive_terms;
  std::optional<double> mean_photon_number;
  // False when exceeding the bound does not certify entanglement.
  bool valid_witness = true;
  WitnessParameters parameters;

  bool violated() const { return value > bound; }
};

WitnessReport micro_micro_witness(const DensityOperator& rho);

// Pseudo-Pauli operators are built at the state's cutoff. A state carrying gain
// metadata must match `gain`.
WitnessReport micro_macro_sigma_witness(const DensityOperator& joint, const GainParams& gain);
WitnessReport micro_macro_sigma_witness(const BranchEnsemble& joint, const GainParams& gain);
WitnessReport micro_macro_sigma_witness(const BranchEnsemble& joint,
                                        const std::array<PseudoPauliOperator, 3>& sigma);

// The same correlations judged against the bound for arbitrary dichotomic
// measurements on the macro side.
WitnessReport against_dichotomic_bound(WitnessReport report);

WitnessReport ofilter_witness(const DensityOperator& joint, int k);
WitnessReport ofilter_witness(const BranchEnsemble& joint, int k);

// sum_j |Tr(rho s_j)| for a single qubit.
double dichotomic_sum(const cmatrix2& rho);

struct BoundMaximum {
  double value = 0.0;
  Eigen::Vector3d bloch = Eigen::Vector3d::Zero();
};

// Maximum of dichotomic_sum over pure qubit states: a dense (theta, phi) grid
// followed by a shrinking pattern search around the best node.
BoundMaximum generalized_dichotomic_bound(int grid = 120);

struct SeparableCounterexample {
  int N = 0;
  int M = 0;
  // (1/M) sum_j |pi_phij>_A <pi_phij| (x) |0, N>_phij <0, N|, phi_j = 2 pi j / M.
  BranchEnsemble state;

  DensityOperator density() const { return state.to_density(); }
};

SeparableCounterexample separable_counterexample(int N, int M = 64);

WitnessReport simon_spin_witness(const DensityOperator& joint);
WitnessReport simon_spin_witness(const BranchEnsemble& joint);

}  // namespace micromacro
