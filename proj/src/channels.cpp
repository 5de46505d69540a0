#include "micromacro/channels.hpp"

#include <cmath>

namespace micromacro {

void LossParams::validate() const {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("transmittivity eta must lie in [0, 1]");
}

void InjectionParams::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("injection probability p must lie in [0, 1]");
}

double loss_amplitude(int n, int lost, double eta) {
  if (lost < 0 || lost > n) return 0.0;
  if (eta >= 1.0) return lost == 0 ? 1.0 : 0.0;
  if (eta <= 0.0) return lost == n ? 1.0 : 0.0;
  const double log_w = std::lgamma(n + 1.0) - std::lgamma(lost + 1.0) -
                       std::lgamma(n - lost + 1.0) + (n - lost) * std::log(eta) +
                       lost * std::log1p(-eta);
  return std::exp(0.5 * log_w);
}

namespace {

// table(n, l) = loss_amplitude(n, l, eta) for 0 <= l <= n <= cutoff.
Eigen::MatrixXd loss_table(int cutoff, double eta) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(cutoff + 1, cutoff + 1);
  for (int n = 0; n <= cutoff; ++n)
    for (int l = 0; l <= n; ++l) t(n, l) = loss_amplitude(n, l, eta);
  return t;
}

// K_pq applied to a sparse vector.
TwoModeVector apply_kraus(const TwoModeVector& v, int p, int q, const Eigen::MatrixXd& table) {
  TwoModeVector out(v.cutoff(), v.basis());
  for (SparseVec::InnerIterator it(v.amplitudes()); it; ++it) {
    const FockIndex f = layout::fock_index(static_cast<int>(it.index()));
    if (f.n < p || f.m < q) continue;
    const double w = table(f.n, p) * table(f.m, q);
    if (w != 0.0) out.add({f.n - p, f.m - q}, w * it.value());
  }
  return out;
}

}  // namespace

ModeOperator loss_kraus(int cutoff, int p, int q, double eta) {
  const int dim = layout::dimension(cutoff);
  std::vector<Eigen::Triplet<cplx>> triplets;
  for (int n = p; n <= cutoff; ++n)
    for (int m = q; n + m <= cutoff; ++m) {
      const double w = loss_amplitude(n, p, eta) * loss_amplitude(m, q, eta);
      if (w != 0.0) triplets.emplace_back(layout::index(n - p, m - q), layout::index(n, m), w);
    }
  ModeOperator k(dim, dim);
  k.setFromTriplets(triplets.begin(), triplets.end());
  return k;
}

DensityOperator lossy_channel(const TwoModeVector& state, const LossParams& loss) {
  return lossy_channel(DensityOperator::pure(state), loss);
}

DensityOperator lossy_channel(const DensityOperator& rho, const LossParams& loss) {
  loss.validate();
  if (rho.layout() == DensityOperator::Layout::QubitQubit)
    throw DimensionError("the loss channel acts on a two-mode field");
  const int cutoff = rho.cutoff();
  const int d = rho.mode_dimension();
  const int blocks = rho.layout() == DensityOperator::Layout::Mode ? 1 : 2;
  cmatrix out = cmatrix::Zero(rho.dimension(), rho.dimension());
  for (int p = 0; p <= cutoff; ++p)
    for (int q = 0; p + q <= cutoff; ++q) {
      const ModeOperator k = loss_kraus(cutoff, p, q, loss.eta);
      if (k.nonZeros() == 0) continue;
      const ModeOperator kt = k.adjoint();
      for (int a = 0; a < blocks; ++a)
        for (int b = 0; b < blocks; ++b) {
          const cmatrix kx = k * rho.matrix().block(a * d, b * d, d, d);
          out.block(a * d, b * d, d, d) += kx * kt;
        }
    }
  DensityOperator result(out, rho.layout(), cutoff, rho.basis());
  return rho.gain() ? result.with_gain(*rho.gain()) : result;
}

BranchEnsemble lossy_channel(const BranchEnsemble& rho, const LossParams& loss, double drop) {
  loss.validate();
  const int cutoff = rho.cutoff();
  const Eigen::MatrixXd table = loss_table(cutoff, loss.eta);
  const double threshold = drop * rho.trace();
  BranchEnsemble out(cutoff, rho.basis());
  if (rho.gain()) out.set_gain(*rho.gain());
  for (const auto& branch : rho.branches())
    for (int p = 0; p <= cutoff; ++p)
      for (int q = 0; p + q <= cutoff; ++q) {
        QubitModeVector lost(apply_kraus(branch[0], p, q, table),
                             apply_kraus(branch[1], p, q, table));
        if (lost.squared_norm() > threshold) out.add(std::move(lost));
      }
  return out;
}

PhotonDistribution lossy_channel(const PhotonDistribution& dist, const LossParams& loss) {
  loss.validate();
  const int n_max = dist.n_max();
  // kernel(k, n) = P(n photons -> k survive)
  Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
  for (int n = 0; n <= n_max; ++n)
    for (int k = 0; k <= n; ++k) {
      const double a = loss_amplitude(n, n - k, loss.eta);
      kernel(k, n) = a * a;
    }
  PhotonDistribution out;
  out.basis = dist.basis;
  out.probability = (kernel * dist.probability.matrix() * kernel.transpose()).array();
  return out;
}

namespace {

// Accumulates the one-photon sector of every branch, unnormalized.
cmatrix4 one_photon_sector(const BranchEnsemble& rho) {
  cmatrix2 to_hv = cmatrix2::Identity();
  if (!(rho.basis() == PolarizationBasis::hv()))
    to_hv = rotation_block(rho.basis(), PolarizationBasis::hv(), 1);
  cmatrix4 acc = cmatrix4::Zero();
  Eigen::Matrix<cplx, 4, 1> w;
  for (const auto& branch : rho.branches()) {
    for (int a = 0; a < 2; ++a) {
      const Eigen::Matrix<cplx, 2, 1> b(branch[a].amplitude({1, 0}), branch[a].amplitude({0, 1}));
      w.segment<2>(2 * a) = to_hv * b;
    }
    acc.noalias() += w * w.adjoint();
  }
  return acc;
}

}  // namespace

double single_photon_probability(const BranchEnsemble& rho) {
  return one_photon_sector(rho).trace().real() / rho.trace();
}

DensityOperator condition_on_single_photon(const BranchEnsemble& rho) {
  const cmatrix4 acc = one_photon_sector(rho);
  const double tr = acc.trace().real();
  if (!(tr > 1e-300)) throw NonPhysicalState("no weight in the one-photon sector");
  return DensityOperator::qubit_pair(acc / tr);
}

DensityOperator attenuate_to_single_photon(const MicroMacroState& joint, const LossParams& loss) {
  return condition_on_single_photon(lossy_channel(joint.ensemble(), loss));
}

BranchEnsemble mixed_injection_ensemble(const InjectionParams& injection) {
  injection.validate();
  const double p = injection.p;
  BranchEnsemble e(1);
  if (p > 0.0) {
    QubitModeVector singlet(1);
    singlet[0].set({0, 1}, std::sqrt(p / 2));
    singlet[1].set({1, 0}, -std::sqrt(p / 2));
    e.add(std::move(singlet));
  }
  if (p < 1.0)
    for (int a = 0; a < 2; ++a) {
      QubitModeVector vac(1);
      vac[a].set({0, 0}, std::sqrt((1 - p) / 2));
      e.add(std::move(vac));
    }
  return e;
}

DensityOperator mixed_injection_state(const InjectionParams& injection) {
  return mixed_injection_ensemble(injection).to_density();
}

DensityOperator simulate_attenuated_state(const InjectionParams& injection,
                                          const GainParams& gain, const LossParams& loss,
                                          const Cutoff& cutoff) {
  const BranchEnsemble amplified = amplify(mixed_injection_ensemble(injection), gain, cutoff);
  return condition_on_single_photon(lossy_channel(amplified, loss));
}

double attenuation_parameter(const GainParams& gain, const LossParams& loss) {
  gain.validate();
  loss.validate();
  return (1.0 - loss.eta) * gain.Gamma();
}

cmatrix4 single_photon_state(double t) {
  if (!(t >= 0.0 && t < 1.0)) throw DomainError("attenuation parameter t must lie in [0, 1)");
  const double t2 = t * t;
  const double h = 0.5 * (1 + t2);
  cmatrix4 rho = cmatrix4::Zero();
  rho(0, 0) = t2;
  rho(1, 1) = h;
  rho(2, 2) = h;
  rho(1, 2) = -h;
  rho(2, 1) = -h;
  rho(3, 3) = t2;
  return rho / (1 + 3 * t2);
}

DensityOperator attenuated_state_with_injection(const InjectionParams& injection,
                                                const GainParams& gain,
                                                const LossParams& loss) {
  injection.validate();
  const double t = attenuation_parameter(gain, loss);
  const double c2 = gain.C() * gain.C();
  const double p = injection.p;
  // single_photon_state(t) carries the factor 1 / (1 + 3t^2); undo it.
  const cmatrix4 singlet_branch =
      (2 * p / c2) / (1 - t * t) * (1 + 3 * t * t) * single_photon_state(t);
  const cmatrix4 vacuum_branch = (1 - p) * gain.Gamma() * t * cmatrix4::Identity();
  const cmatrix4 sum = singlet_branch + vacuum_branch;
  const double tr = sum.trace().real();
  if (!(tr > 0.0)) throw NonPhysicalState("conditioned state has zero weight");
  return DensityOperator::qubit_pair(sum / tr);
}

}  // namespace micromacro
