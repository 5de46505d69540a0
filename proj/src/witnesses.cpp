#include "micromacro/witnesses.hpp"

#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

namespace micromacro {

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::MicroMicro: return "micro-micro";
    case Criterion::PseudoPauli: return "pseudo-pauli";
    case Criterion::GeneralizedDichotomic: return "dichotomic";
    case Criterion::OFilter: return "o-filter";
    case Criterion::SimonSpin: return "simon-spin";
  }
  return "unknown";
}

namespace {

WitnessReport sum_of_magnitudes(Criterion c, double bound, const std::array<double, 3>& terms) {
  WitnessReport r;
  r.criterion = c;
  r.bound = bound;
  r.terms = terms;
  r.value = std::abs(terms[0]) + std::abs(terms[1]) + std::abs(terms[2]);
  return r;
}

void check_gain(std::optional<double> state_gain, double g) {
  if (state_gain && std::abs(*state_gain - g) > 1e-12)
    throw DomainError("state was amplified with g=" + std::to_string(*state_gain) +
                      " but the operators use g=" + std::to_string(g));
}

// Operators are built at the state's own truncation, which was already checked
// against its tail tolerance when the state was constructed.
Cutoff matching_cutoff(int n_max) { return {n_max, 0.5}; }

template <typename State, typename Ops>
std::array<double, 3> correlations(const State& rho, const Ops& ops) {
  std::array<double, 3> t{};
  for (int i = 0; i < 3; ++i) t[i] = local_expectation(rho, pauli(i + 1), ops[i]).real();
  return t;
}

}  // namespace

WitnessReport micro_micro_witness(const DensityOperator& rho) {
  if (rho.layout() != DensityOperator::Layout::QubitQubit)
    throw DimensionError("micro-micro witness needs a two-qubit state");
  std::array<double, 3> t{};
  for (int i = 0; i < 3; ++i) {
    const cmatrix4 op = Eigen::kroneckerProduct(pauli(i + 1), pauli(i + 1));
    t[i] = expectation(rho, cmatrix(op)).real();
  }
  return sum_of_magnitudes(Criterion::MicroMicro, 1.0, t);
}

WitnessReport micro_macro_sigma_witness(const DensityOperator& joint, const GainParams& gain) {
  if (joint.layout() != DensityOperator::Layout::QubitMode)
    throw DimensionError("pseudo-Pauli witness needs a qubit (x) mode state");
  check_gain(joint.gain(), gain.g);
  const DensityOperator rho = rotate_basis(joint, PolarizationBasis::hv());
  const Cutoff cutoff = matching_cutoff(rho.cutoff());
  const std::array<PseudoPauliOperator, 3> ops{sigma_operator(1, gain, cutoff),
                                                 sigma_operator(2, gain, cutoff),
                                                 sigma_operator(3, gain, cutoff)};
  WitnessReport r = sum_of_magnitudes(Criterion::PseudoPauli, 1.0, correlations(rho, ops));
  r.parameters.g = gain.g;
  return r;
}

WitnessReport micro_macro_sigma_witness(const BranchEnsemble& joint, const GainParams& gain) {
  check_gain(joint.gain(), gain.g);
  const Cutoff cutoff = matching_cutoff(joint.cutoff());
  return micro_macro_sigma_witness(
      joint, {sigma_operator(1, gain, cutoff), sigma_operator(2, gain, cutoff),
              sigma_operator(3, gain, cutoff)});
}

WitnessReport micro_macro_sigma_witness(const BranchEnsemble& joint,
                                        const std::array<PseudoPauliOperator, 3>& sigma) {
  for (const auto& s : sigma) {
    if (s.cutoff() != joint.cutoff())
      throw DimensionError("pseudo-Pauli operators and state use different cutoffs");
    check_gain(joint.gain(), s.gain().g);
  }
  const BranchEnsemble rho = joint.basis() == PolarizationBasis::hv()
                                 ? joint
                                 : rotate_basis(joint, PolarizationBasis::hv());
  WitnessReport r = sum_of_magnitudes(Criterion::PseudoPauli, 1.0, correlations(rho, sigma));
  r.parameters.g = sigma[0].gain().g;
  return r;
}

WitnessReport against_dichotomic_bound(WitnessReport report) {
  report.criterion = Criterion::GeneralizedDichotomic;
  report.bound = std::sqrt(3.0);
  return report;
}

namespace {

template <typename State>
WitnessReport ofilter_report(const State& rho, int cutoff, int k) {
  std::array<DiagonalModeOperator, 3> pi;
  std::array<DiagonalModeOperator, 3> conclusive;
  for (int i = 0; i < 3; ++i) {
    const ThresholdPOVM povm(PolarizationBasis::canonical(i + 1), k);
    pi[i] = povm.dichotomic(cutoff);
    conclusive[i] = povm.effect(Outcome::Plus, cutoff);
    conclusive[i].value += povm.effect(Outcome::Minus, cutoff).value;
  }
  WitnessReport r = sum_of_magnitudes(Criterion::OFilter, 1.0, correlations(rho, pi));
  std::array<double, 3> normalized{};
  for (int i = 0; i < 3; ++i) {
    const double p = local_expectation(rho, cmatrix2::Identity(), conclusive[i]).real();
    normalized[i] = p > 0.0 ? r.terms[i] / p : 0.0;
  }
  r.conclusive_terms = normalized;
  r.valid_witness = false;
  r.parameters.k = k;
  return r;
}

}  // namespace

WitnessReport ofilter_witness(const DensityOperator& joint, int k) {
  if (k < 0) throw DomainError("O-Filter threshold k must be non-negative");
  if (joint.layout() != DensityOperator::Layout::QubitMode)
    throw DimensionError("O-Filter witness needs a qubit (x) mode state");
  return ofilter_report(joint, joint.cutoff(), k);
}

WitnessReport ofilter_witness(const BranchEnsemble& joint, int k) {
  if (k < 0) throw DomainError("O-Filter threshold k must be non-negative");
  return ofilter_report(joint, joint.cutoff(), k);
}

// ---------------------------------------------------------------------------

double dichotomic_sum(const cmatrix2& rho) {
  double s = 0.0;
  for (int j = 1; j <= 3; ++j) s += std::abs((rho * pauli(j)).trace().real());
  return s;
}

namespace {

double pure_state_sum(double theta, double phi) {
  Eigen::Matrix<cplx, 2, 1> psi(std::cos(theta / 2), std::polar(std::sin(theta / 2), phi));
  return dichotomic_sum(psi * psi.adjoint());
}

}  // namespace

BoundMaximum generalized_dichotomic_bound(int grid) {
  if (grid < 4) throw DomainError("bound search grid must have at least 4 nodes per axis");
  double best = -1.0, bt = 0.0, bp = 0.0;
  for (int i = 0; i <= grid; ++i)
    for (int j = 0; j < 2 * grid; ++j) {
      const double theta = kPi * i / grid;
      const double phi = kPi * j / grid;
      const double v = pure_state_sum(theta, phi);
      if (v > best) best = v, bt = theta, bp = phi;
    }
  for (double step = kPi / grid; step > 1e-13;) {
    bool moved = false;
    for (const auto& [dt, dp] : {std::pair{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}) {
      const double v = pure_state_sum(bt + dt, bp + dp);
      if (v > best) {
        best = v, bt += dt, bp += dp;
        moved = true;
        break;
      }
    }
    if (!moved) step /= 2;
  }
  Eigen::Matrix<cplx, 2, 1> psi(std::cos(bt / 2), std::polar(std::sin(bt / 2), bp));
  const cmatrix2 rho = psi * psi.adjoint();
  BoundMaximum out;
  out.value = best;
  for (int j = 0; j < 3; ++j) out.bloch[j] = (rho * pauli(j + 1)).trace().real();
  return out;
}

// ---------------------------------------------------------------------------

SeparableCounterexample separable_counterexample(int N, int M) {
  if (N < 1) throw DomainError("counterexample needs N >= 1 photons");
  if (M < 8) throw DomainError("counterexample needs at least 8 quadrature nodes");
  BranchEnsemble state(N);
  const double w = 1.0 / std::sqrt(static_cast<double>(M));
  for (int j = 0; j < M; ++j) {
    const PolarizationBasis basis = PolarizationBasis::equatorial(2 * kPi * j / M);
    const TwoModeVector field =
        rotate_basis(TwoModeVector::fock(0, N, N, basis), PolarizationBasis::hv());
    const cmatrix2 modes = basis.modes();
    state.add(QubitModeVector(field.scaled(w * modes(0, 0)), field.scaled(w * modes(0, 1))));
  }
  return {N, M, std::move(state)};
}

// ---------------------------------------------------------------------------

namespace {

template <typename State>
WitnessReport simon_report(const State& rho, int cutoff) {
  const StokesOperators ops = stokes_operators(cutoff);
  WitnessReport r;
  r.criterion = Criterion::SimonSpin;
  r.bound = 0.0;
  r.terms = correlations(rho, ops.J);
  r.mean_photon_number = local_expectation(rho, cmatrix2::Identity(), ops.N).real();
  r.value = std::abs(r.terms[0] + r.terms[1] + r.terms[2]) - *r.mean_photon_number;
  if (rho.gain()) r.parameters.g = *rho.gain();
  return r;
}

}  // namespace

WitnessReport simon_spin_witness(const DensityOperator& joint) {
  if (joint.layout() != DensityOperator::Layout::QubitMode)
    throw DimensionError("Stokes witness needs a qubit (x) mode state");
  const DensityOperator rho = rotate_basis(joint, PolarizationBasis::hv());
  return simon_report(rho, rho.cutoff());
}

WitnessReport simon_spin_witness(const BranchEnsemble& joint) {
  const BranchEnsemble rho = joint.basis() == PolarizationBasis::hv()
                                 ? joint
                                 : rotate_basis(joint, PolarizationBasis::hv());
  return simon_report(rho, rho.cutoff());
}

}  // namespace micromacro
