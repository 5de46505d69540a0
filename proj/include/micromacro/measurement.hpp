#pragma once

#include <array>

#include "micromacro/amplifier.hpp"
#include "micromacro/channels.hpp"

namespace micromacro {

// Dichotomic polarization observable |pi><pi| - |pi_perp><pi_perp| of a basis,
// written on H/V components. For the canonical bases 1, 2, 3 this gives
// Z, Y and X respectively, a left-handed triple: [s2, s3] = -2i s1.
cmatrix2 pauli(const PolarizationBasis& basis);
cmatrix2 pauli(int index);

// Sigma_i = U sigma_i U+ restricted to the amplified image of the one-photon
// space: sum_ab (sigma_i)_ab |Phi^a><Phi^b| over the amplified |H>, |V>.
// Stored by its rank-2 factors; to_sparse() materializes the matrix.
class PseudoPauliOperator {
 public:
  PseudoPauliOperator(int index, const GainParams& gain, const Cutoff& cutoff);

  int index() const noexcept { return index_; }
  const GainParams& gain() const noexcept { return gain_; }
  int cutoff() const noexcept { return cutoff_; }
  const cmatrix2& sigma() const noexcept { return sigma_; }
  const TwoModeVector& amplified(int a) const { return amplified_[a]; }

  ModeOperator to_sparse() const;

 private:
  int index_;
  GainParams gain_;
  int cutoff_;
  cmatrix2 sigma_;
  std::vector<TwoModeVector> amplified_;
};

PseudoPauliOperator sigma_operator(int index, const GainParams& gain, const Cutoff& cutoff);

cplx bilinear(const PseudoPauliOperator& op, const TwoModeVector& x, const TwoModeVector& y);
cplx trace_product(const PseudoPauliOperator& op, const cmatrix& x);

// Operator diagonal in the Fock basis of `basis`, with eigenvalue value(n, m)
// on |n, m>. Applied by rotating vectors into its eigenbasis.
struct DiagonalModeOperator {
  PolarizationBasis basis = PolarizationBasis::hv();
  int cutoff = 0;
  Eigen::ArrayXXd value;

  ModeOperator to_sparse(const PolarizationBasis& storage = PolarizationBasis::hv()) const;
};

cplx bilinear(const DiagonalModeOperator& op, const TwoModeVector& x, const TwoModeVector& y);
cplx trace_product(const DiagonalModeOperator& op, const cmatrix& x);

enum class Outcome { Plus, Minus, Inconclusive };

struct OutcomeProbabilities {
  double plus = 0.0;
  double minus = 0.0;
  double inconclusive = 0.0;

  double conclusive() const { return plus + minus; }
  double total() const { return plus + minus + inconclusive; }
};

// O-Filter: +1 when n - m > k, -1 when m - n > k, inconclusive when |n - m| <= k.
// For k = 0 nothing is inconclusive: a balanced |n, n> gives +1 or -1 with
// probability 1/2 each.
class ThresholdPOVM {
 public:
  ThresholdPOVM(PolarizationBasis basis, int k);

  const PolarizationBasis& basis() const noexcept { return basis_; }
  int threshold() const noexcept { return k_; }

  double weight(Outcome outcome, int n, int m) const;
  DiagonalModeOperator effect(Outcome outcome, int cutoff) const;
  // E+ - E-: the O-Filter substitute for a pseudo-Pauli operator.
  DiagonalModeOperator dichotomic(int cutoff) const;

 private:
  PolarizationBasis basis_;
  int k_;
};

OutcomeProbabilities ofilter_probabilities(const PhotonDistribution& dist, int k);
OutcomeProbabilities ofilter_probabilities(const TwoModeVector& state,
                                           const PolarizationBasis& basis, int k);
OutcomeProbabilities ofilter_probabilities(const DensityOperator& rho,
                                           const PolarizationBasis& basis, int k);

// (P+ - P-) / (P+ + P-); throws UndefinedVisibility when nothing is conclusive.
double visibility(const OutcomeProbabilities& probs);
// |Phi^phi> through the loss channel, measured by the O-Filter in its own basis.
double visibility(double phi, const GainParams& gain, const LossParams& loss, int k,
                  const Cutoff& cutoff);

// Probability that n photons spread uniformly over `detectors` detectors fire
// all of them, for n = 0..n_max.
Eigen::VectorXd all_click_probability(int n_max, int detectors);

// Each polarization branch is split over N detectors; +1 needs all N clicks on
// the pi branch and not on the pi_perp branch, -1 the converse.
OutcomeProbabilities multi_detector_probabilities(const PhotonDistribution& dist, int detectors);
OutcomeProbabilities multi_detector_probabilities(const TwoModeVector& state,
                                                  const PolarizationBasis& basis,
                                                  int detectors);
OutcomeProbabilities multi_detector_probabilities(const DensityOperator& rho,
                                                  const PolarizationBasis& basis,
                                                  int detectors);

// J = b+_pi b_pi - b+_perp b_perp in H/V storage, built from ladder operators.
ModeOperator stokes_operator(const PolarizationBasis& basis, int cutoff);
ModeOperator stokes_operator(int index, int cutoff);

struct StokesOperators {
  std::array<ModeOperator, 3> J;
  ModeOperator N;
};
StokesOperators stokes_operators(int cutoff);

// |<sigma^A . J^B>| - <N^B>
double stokes_correlation(const DensityOperator& joint);
double stokes_correlation(const BranchEnsemble& joint);

}  // namespace micromacro
