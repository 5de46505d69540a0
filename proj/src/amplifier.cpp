#include "micromacro/amplifier.hpp"

#include <cmath>
#include <string>

namespace micromacro {

void GainParams::validate() const {
  if (!(g >= 0.0) || !std::isfinite(g)) throw DomainError("gain g must be finite and >= 0");
}

namespace {

double log_factorial(int n) { return std::lgamma(n + 1.0); }

void check_cutoff(const GainParams& gain, const Cutoff& cutoff, double tail) {
  gain.validate();
  cutoff.validate();
  if (tail > cutoff.tail_tolerance)
    throw CutoffError("cutoff " + std::to_string(cutoff.n_max) + " leaves tail mass " +
                          std::to_string(tail) + " at g=" + std::to_string(gain.g) +
                          "; at least " +
                          std::to_string(required_cutoff(gain, cutoff.tail_tolerance)) +
                          " is needed",
                      tail, cutoff.n_max);
}

}  // namespace

cplx gamma_ij(int i, int j, double phi, const GainParams& gain) {
  if (i < 0 || j < 0) throw DomainError("gamma_ij indices must be non-negative");
  gain.validate();
  if (i == 0 && j == 0) return 1.0;
  const double gamma = gain.Gamma();
  if (gamma == 0.0) return 0.0;
  const double log_mag = (i + j) * std::log(gamma / 2) +
                         0.5 * (log_factorial(2 * i + 1) + log_factorial(2 * j)) -
                         log_factorial(i) - log_factorial(j);
  const double sign = (j % 2 == 0) ? 1.0 : -1.0;
  return sign * std::polar(std::exp(log_mag), -(i + j) * phi);
}

double hv_amplified_coefficient(int n, const GainParams& gain) {
  if (n < 0) throw DomainError("photon index must be non-negative");
  gain.validate();
  const double c2 = std::cosh(gain.g) * std::cosh(gain.g);
  if (n == 0) return 1.0 / c2;
  const double gamma = gain.Gamma();
  if (gamma == 0.0) return 0.0;
  return std::exp(n * std::log(gamma) + 0.5 * std::log(n + 1.0)) / c2;
}

double mean_photon_number(const GainParams& gain) {
  const double s = gain.S();
  return 1.0 + 4.0 * s * s;
}

// Total photon numbers 2n+1 carry weight (n+1) x^n (1-x)^2 with x = Gamma^2;
// the tail beyond the first K terms sums to x^K (K + 1 - K x).
double macro_qubit_tail_mass(const GainParams& gain, int n_max) {
  if (n_max < 0) return 1.0;
  const double x = gain.Gamma() * gain.Gamma();
  const int kept = (n_max + 1) / 2;
  return std::pow(x, kept) * (kept + 1 - kept * x);
}

// Total photon numbers 2n carry weight x^n (1-x).
double amplified_vacuum_tail_mass(const GainParams& gain, int n_max) {
  if (n_max < 0) return 1.0;
  const double x = gain.Gamma() * gain.Gamma();
  return std::pow(x, n_max / 2 + 1);
}

int required_cutoff(const GainParams& gain, double tail_tolerance, int limit) {
  gain.validate();
  for (int n = 1; n <= limit; ++n)
    if (macro_qubit_tail_mass(gain, n) <= tail_tolerance) return n;
  throw CutoffError("no cutoff up to " + std::to_string(limit) + " meets the tail tolerance",
                    macro_qubit_tail_mass(gain, limit), limit);
}

MacroQubit macro_qubit(double phi, const GainParams& gain, const Cutoff& cutoff) {
  const double tail = macro_qubit_tail_mass(gain, cutoff.n_max);
  check_cutoff(gain, cutoff, tail);
  const PolarizationBasis basis = PolarizationBasis::equatorial(phi);
  TwoModeVector state(cutoff.n_max, basis);
  const double c2 = gain.C() * gain.C();
  for (int i = 0; 2 * i + 1 <= cutoff.n_max; ++i)
    for (int j = 0; 2 * i + 1 + 2 * j <= cutoff.n_max; ++j) {
      const cplx a = gamma_ij(i, j, phi, gain) / c2;
      if (std::abs(a) >= kDropThreshold) state.set({2 * i + 1, 2 * j}, a);
    }
  return {basis.phase(), gain, std::move(state), tail};
}

TwoModeVector hv_macro_qubit(int a, const GainParams& gain, const Cutoff& cutoff) {
  if (a != 0 && a != 1) throw DomainError("H/V component index must be 0 or 1");
  check_cutoff(gain, cutoff, macro_qubit_tail_mass(gain, cutoff.n_max));
  TwoModeVector state(cutoff.n_max);
  for (int n = 0; 2 * n + 1 <= cutoff.n_max; ++n) {
    const double c = hv_amplified_coefficient(n, gain);
    if (c < kDropThreshold) break;
    state.set(a == 0 ? FockIndex{n + 1, n} : FockIndex{n, n + 1}, c);
  }
  return state.normalized();
}

TwoModeVector amplified_vacuum(const GainParams& gain, const Cutoff& cutoff) {
  check_cutoff(gain, cutoff, amplified_vacuum_tail_mass(gain, cutoff.n_max));
  TwoModeVector state(cutoff.n_max);
  const double gamma = gain.Gamma();
  const double c = gain.C();
  for (int n = 0; 2 * n <= cutoff.n_max; ++n) {
    const double amp = n == 0 ? 1.0 / c : std::exp(n * std::log(gamma) - std::log(c));
    if (amp < kDropThreshold) break;
    state.set({n, n}, amp);
  }
  return state.normalized();
}

BranchEnsemble MicroMacroState::ensemble() const {
  BranchEnsemble e = BranchEnsemble::pure(state);
  e.set_gain(gain.g);
  return e;
}

DensityOperator MicroMacroState::density() const {
  return DensityOperator::pure(state).with_gain(gain.g);
}

MicroMacroState micro_macro_state(double phi, const GainParams& gain, const Cutoff& cutoff) {
  const TwoModeVector phi_h = hv_macro_qubit(0, gain, cutoff);
  const TwoModeVector phi_v = hv_macro_qubit(1, gain, cutoff);
  const cplx e = std::polar(1.0, phi);
  const double s = 1.0 / std::sqrt(2.0);
  // By linearity of U: Phi^phi = (Phi^H + e^{i phi} Phi^V)/sqrt2, Phi^{phi_perp} likewise with -e.
  const TwoModeVector amp_phi = (phi_h + phi_v.scaled(e)).scaled(s);
  const TwoModeVector amp_perp = (phi_h + phi_v.scaled(-e)).scaled(s);
  const cmatrix2 modes = PolarizationBasis::equatorial(phi).modes();
  QubitModeVector psi(cutoff.n_max);
  for (int a = 0; a < 2; ++a)
    psi[a] = (amp_perp.scaled(modes(0, a)) + amp_phi.scaled(-modes(1, a))).scaled(s);
  return {PolarizationBasis::equatorial(phi).phase(), gain, std::move(psi),
          macro_qubit_tail_mass(gain, cutoff.n_max)};
}

BranchEnsemble amplify(const BranchEnsemble& input, const GainParams& gain,
                       const Cutoff& cutoff) {
  if (!(input.basis() == PolarizationBasis::hv()))
    throw DomainError("amplifier input must be expressed in the H/V basis");
  const TwoModeVector vac = amplified_vacuum(gain, cutoff);
  const TwoModeVector phi_h = hv_macro_qubit(0, gain, cutoff);
  const TwoModeVector phi_v = hv_macro_qubit(1, gain, cutoff);
  BranchEnsemble out(cutoff.n_max);
  out.set_gain(gain.g);
  for (const auto& branch : input.branches()) {
    QubitModeVector amplified(cutoff.n_max);
    for (int a = 0; a < 2; ++a) {
      for (SparseVec::InnerIterator it(branch[a].amplitudes()); it; ++it)
        if (it.index() > 2) throw DomainError("amplifier input holds more than one photon");
      amplified[a] = vac.scaled(branch[a].amplitude({0, 0})) +
                     phi_h.scaled(branch[a].amplitude({1, 0})) +
                     phi_v.scaled(branch[a].amplitude({0, 1}));
      amplified[a].prune();
    }
    out.add(std::move(amplified));
  }
  return out;
}

}  // namespace micromacro
