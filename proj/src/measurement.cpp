#include "micromacro/measurement.hpp"

#include <cmath>

namespace micromacro {

cmatrix2 pauli(const PolarizationBasis& basis) {
  const cmatrix2 u = basis.modes();
  // Rows of `modes` are Jones vectors; as kets they are the transposed rows.
  const Eigen::Matrix<cplx, 2, 1> pi = u.row(0).transpose();
  const Eigen::Matrix<cplx, 2, 1> perp = u.row(1).transpose();
  return pi * pi.adjoint() - perp * perp.adjoint();
}

cmatrix2 pauli(int index) { return pauli(PolarizationBasis::canonical(index)); }

// ---------------------------------------------------------------------------

PseudoPauliOperator::PseudoPauliOperator(int index, const GainParams& gain, const Cutoff& cutoff)
    : index_(index), gain_(gain), cutoff_(cutoff.n_max), sigma_(pauli(index)) {
  amplified_.push_back(hv_macro_qubit(0, gain, cutoff));
  amplified_.push_back(hv_macro_qubit(1, gain, cutoff));
}

ModeOperator PseudoPauliOperator::to_sparse() const {
  const int dim = layout::dimension(cutoff_);
  std::vector<Eigen::Triplet<cplx>> triplets;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      if (sigma_(a, b) == cplx(0.0)) continue;
      for (SparseVec::InnerIterator x(amplified_[a].amplitudes()); x; ++x)
        for (SparseVec::InnerIterator y(amplified_[b].amplitudes()); y; ++y)
          triplets.emplace_back(x.index(), y.index(), sigma_(a, b) * x.value() * std::conj(y.value()));
    }
  ModeOperator op(dim, dim);
  op.setFromTriplets(triplets.begin(), triplets.end());
  return op;
}

PseudoPauliOperator sigma_operator(int index, const GainParams& gain, const Cutoff& cutoff) {
  return PseudoPauliOperator(index, gain, cutoff);
}

cplx bilinear(const PseudoPauliOperator& op, const TwoModeVector& x, const TwoModeVector& y) {
  if (x.cutoff() != op.cutoff() || y.cutoff() != op.cutoff())
    throw DimensionError("pseudo-Pauli operator built at a different cutoff than the state");
  if (!(x.basis() == PolarizationBasis::hv()) || !(y.basis() == PolarizationBasis::hv()))
    throw DimensionError("pseudo-Pauli operators act on H/V storage");
  cplx xa[2], by[2];
  for (int a = 0; a < 2; ++a) {
    xa[a] = x.amplitudes().dot(op.amplified(a).amplitudes());
    by[a] = op.amplified(a).amplitudes().dot(y.amplitudes());
  }
  cplx acc = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) acc += op.sigma()(a, b) * xa[a] * by[b];
  return acc;
}

cplx trace_product(const PseudoPauliOperator& op, const cmatrix& x) {
  if (x.rows() != layout::dimension(op.cutoff()))
    throw DimensionError("pseudo-Pauli operator built at a different cutoff than the state");
  const cvector phi[2] = {op.amplified(0).to_dense(), op.amplified(1).to_dense()};
  cplx acc = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      if (op.sigma()(a, b) != cplx(0.0)) acc += op.sigma()(a, b) * phi[b].dot(x * phi[a]);
  return acc;
}

// ---------------------------------------------------------------------------

ModeOperator DiagonalModeOperator::to_sparse(const PolarizationBasis& storage) const {
  return diagonal_operator(cutoff, storage, basis, [this](int n, int m) { return value(n, m); });
}

cplx bilinear(const DiagonalModeOperator& op, const TwoModeVector& x, const TwoModeVector& y) {
  if (x.cutoff() != op.cutoff || y.cutoff() != op.cutoff)
    throw DimensionError("operator and state cutoffs differ");
  const TwoModeVector xr = rotate_basis(x, op.basis);
  const TwoModeVector yr = rotate_basis(y, op.basis);
  cplx acc = 0.0;
  for (SparseVec::InnerIterator it(yr.amplitudes()); it; ++it) {
    const cplx xv = xr.amplitudes().coeff(it.index());
    if (xv == cplx(0.0)) continue;
    const FockIndex f = layout::fock_index(static_cast<int>(it.index()));
    acc += std::conj(xv) * op.value(f.n, f.m) * it.value();
  }
  return acc;
}

cplx trace_product(const DiagonalModeOperator& op, const cmatrix& x) {
  if (x.rows() != layout::dimension(op.cutoff)) throw DimensionError("operator and state cutoffs differ");
  return trace_product(op.to_sparse(), x);
}

// ---------------------------------------------------------------------------

ThresholdPOVM::ThresholdPOVM(PolarizationBasis basis, int k) : basis_(basis), k_(k) {
  if (k < 0) throw DomainError("O-Filter threshold k must be non-negative");
}

double ThresholdPOVM::weight(Outcome outcome, int n, int m) const {
  const int d = n - m;
  double plus = d > k_ ? 1.0 : 0.0;
  double minus = -d > k_ ? 1.0 : 0.0;
  if (k_ == 0 && d == 0) plus = minus = 0.5;
  switch (outcome) {
    case Outcome::Plus: return plus;
    case Outcome::Minus: return minus;
    case Outcome::Inconclusive: return 1.0 - plus - minus;
  }
  return 0.0;
}

DiagonalModeOperator ThresholdPOVM::effect(Outcome outcome, int cutoff) const {
  DiagonalModeOperator e{basis_, cutoff, Eigen::ArrayXXd::Zero(cutoff + 1, cutoff + 1)};
  for (int n = 0; n <= cutoff; ++n)
    for (int m = 0; n + m <= cutoff; ++m) e.value(n, m) = weight(outcome, n, m);
  return e;
}

DiagonalModeOperator ThresholdPOVM::dichotomic(int cutoff) const {
  DiagonalModeOperator e = effect(Outcome::Plus, cutoff);
  e.value -= effect(Outcome::Minus, cutoff).value;
  return e;
}

OutcomeProbabilities ofilter_probabilities(const PhotonDistribution& dist, int k) {
  const ThresholdPOVM povm(dist.basis, k);
  OutcomeProbabilities out;
  for (int n = 0; n <= dist.n_max(); ++n)
    for (int m = 0; m <= dist.n_max(); ++m) {
      const double p = dist.probability(n, m);
      if (p == 0.0) continue;
      out.plus += p * povm.weight(Outcome::Plus, n, m);
      out.minus += p * povm.weight(Outcome::Minus, n, m);
      out.inconclusive += p * povm.weight(Outcome::Inconclusive, n, m);
    }
  const double total = out.total();
  if (total > 0.0) {
    out.plus /= total;
    out.minus /= total;
    out.inconclusive /= total;
  }
  return out;
}

OutcomeProbabilities ofilter_probabilities(const TwoModeVector& state,
                                           const PolarizationBasis& basis, int k) {
  if (k < 0) throw DomainError("O-Filter threshold k must be non-negative");
  return ofilter_probabilities(distribution_in_basis(state, basis), k);
}

namespace {

PhotonDistribution distribution_of(const DensityOperator& rho, const PolarizationBasis& basis) {
  if (rho.layout() != DensityOperator::Layout::Mode)
    throw DimensionError("photon statistics need a two-mode field state");
  const DensityOperator r = rotate_basis(rho, basis);
  PhotonDistribution d;
  d.basis = basis;
  d.probability = Eigen::ArrayXXd::Zero(rho.cutoff() + 1, rho.cutoff() + 1);
  for (int i = 0; i < r.dimension(); ++i) {
    const FockIndex f = layout::fock_index(i);
    d.probability(f.n, f.m) = r.matrix()(i, i).real();
  }
  return d;
}

}  // namespace

OutcomeProbabilities ofilter_probabilities(const DensityOperator& rho,
                                           const PolarizationBasis& basis, int k) {
  if (k < 0) throw DomainError("O-Filter threshold k must be non-negative");
  return ofilter_probabilities(distribution_of(rho, basis), k);
}

double visibility(const OutcomeProbabilities& probs) {
  const double conclusive = probs.conclusive();
  if (!(conclusive > 0.0)) throw UndefinedVisibility("no conclusive O-Filter events");
  return (probs.plus - probs.minus) / conclusive;
}

double visibility(double phi, const GainParams& gain, const LossParams& loss, int k,
                  const Cutoff& cutoff) {
  if (k < 0) throw DomainError("O-Filter threshold k must be non-negative");
  const MacroQubit q = macro_qubit(phi, gain, cutoff);
  const PhotonDistribution lossy = lossy_channel(distribution_in_basis(q.state, q.state.basis()), loss);
  return visibility(ofilter_probabilities(lossy, k));
}

// ---------------------------------------------------------------------------

Eigen::VectorXd all_click_probability(int n_max, int detectors) {
  if (detectors < 1) throw DomainError("at least one detector per branch is needed");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_max + 1);
  // occupied(d): probability that exactly d distinct detectors have fired so far.
  Eigen::VectorXd occupied = Eigen::VectorXd::Zero(detectors + 1);
  occupied[0] = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(detectors + 1);
    for (int d = 0; d <= detectors; ++d) {
      if (occupied[d] == 0.0) continue;
      next[d] += occupied[d] * d / detectors;
      if (d < detectors) next[d + 1] += occupied[d] * (detectors - d) / double(detectors);
    }
    occupied = next;
    out[n] = occupied[detectors];
  }
  return out;
}

OutcomeProbabilities multi_detector_probabilities(const PhotonDistribution& dist, int detectors) {
  const Eigen::VectorXd all = all_click_probability(dist.n_max(), detectors);
  OutcomeProbabilities out;
  double total = 0.0;
  for (int n = 0; n <= dist.n_max(); ++n)
    for (int m = 0; m <= dist.n_max(); ++m) {
      const double p = dist.probability(n, m);
      if (p == 0.0) continue;
      total += p;
      out.plus += p * all[n] * (1 - all[m]);
      out.minus += p * all[m] * (1 - all[n]);
    }
  if (total > 0.0) {
    out.plus /= total;
    out.minus /= total;
  }
  out.inconclusive = 1.0 - out.plus - out.minus;
  return out;
}

OutcomeProbabilities multi_detector_probabilities(const TwoModeVector& state,
                                                  const PolarizationBasis& basis,
                                                  int detectors) {
  return multi_detector_probabilities(distribution_in_basis(state, basis), detectors);
}

OutcomeProbabilities multi_detector_probabilities(const DensityOperator& rho,
                                                  const PolarizationBasis& basis,
                                                  int detectors) {
  return multi_detector_probabilities(distribution_of(rho, basis), detectors);
}

// ---------------------------------------------------------------------------

ModeOperator stokes_operator(const PolarizationBasis& basis, int cutoff) {
  // J = sum_xy P_xy a+_x a_y with P the Pauli matrix of the basis on H/V.
  const cmatrix2 p = pauli(basis);
  const int dim = layout::dimension(cutoff);
  std::vector<Eigen::Triplet<cplx>> triplets;
  for (int n = 0; n <= cutoff; ++n)
    for (int m = 0; n + m <= cutoff; ++m) {
      const int col = layout::index(n, m);
      const cplx diag = p(0, 0) * double(n) + p(1, 1) * double(m);
      if (diag != cplx(0.0)) triplets.emplace_back(col, col, diag);
      // a+_H a_V |n, m> = sqrt((n+1) m) |n+1, m-1>
      if (m > 0 && p(0, 1) != cplx(0.0))
        triplets.emplace_back(layout::index(n + 1, m - 1), col, p(0, 1) * std::sqrt(double(n + 1) * m));
      // a+_V a_H |n, m> = sqrt(n (m+1)) |n-1, m+1>
      if (n > 0 && p(1, 0) != cplx(0.0))
        triplets.emplace_back(layout::index(n - 1, m + 1), col, p(1, 0) * std::sqrt(double(n) * (m + 1)));
    }
  ModeOperator op(dim, dim);
  op.setFromTriplets(triplets.begin(), triplets.end());
  return op;
}

ModeOperator stokes_operator(int index, int cutoff) {
  return stokes_operator(PolarizationBasis::canonical(index), cutoff);
}

StokesOperators stokes_operators(int cutoff) {
  return {{stokes_operator(1, cutoff), stokes_operator(2, cutoff), stokes_operator(3, cutoff)},
          number_operator(cutoff)};
}

double stokes_correlation(const DensityOperator& joint) {
  if (joint.layout() != DensityOperator::Layout::QubitMode)
    throw DimensionError("Stokes correlation needs a qubit (x) mode state");
  const DensityOperator rho = rotate_basis(joint, PolarizationBasis::hv());
  const StokesOperators ops = stokes_operators(rho.cutoff());
  double dot = 0.0;
  for (int i = 0; i < 3; ++i) dot += local_expectation(rho, pauli(i + 1), ops.J[i]).real();
  return std::abs(dot) - local_expectation(rho, cmatrix2::Identity(), ops.N).real();
}

double stokes_correlation(const BranchEnsemble& joint) {
  const BranchEnsemble rho =
      joint.basis() == PolarizationBasis::hv() ? joint : rotate_basis(joint, PolarizationBasis::hv());
  const StokesOperators ops = stokes_operators(rho.cutoff());
  double dot = 0.0;
  for (int i = 0; i < 3; ++i) dot += local_expectation(rho, pauli(i + 1), ops.J[i]).real();
  return std::abs(dot) - local_expectation(rho, cmatrix2::Identity(), ops.N).real();
}

}  // namespace micromacro
