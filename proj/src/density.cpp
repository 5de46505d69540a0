#include "micromacro/density.hpp"

#include <cmath>

namespace micromacro {

namespace {

void require_same_space(const TwoModeVector& a, const TwoModeVector& b) {
  if (a.cutoff() != b.cutoff() || !(a.basis() == b.basis()))
    throw DimensionError("vectors live in different two-mode spaces");
}

void guard_dense(Eigen::Index dim) {
  if (dim > kMaxDenseDimension)
    throw DimensionError("dense density matrix of dimension " + std::to_string(dim) +
                         " exceeds the dense limit; use a BranchEnsemble");
}

}  // namespace

// ---------------------------------------------------------------------------

QubitModeVector::QubitModeVector(TwoModeVector h, TwoModeVector v) {
  require_same_space(h, v);
  components_.push_back(std::move(h));
  components_.push_back(std::move(v));
}

QubitModeVector::QubitModeVector(int cutoff, PolarizationBasis basis)
    : QubitModeVector(TwoModeVector(cutoff, basis), TwoModeVector(cutoff, basis)) {}

double QubitModeVector::squared_norm() const {
  return components_[0].squared_norm() + components_[1].squared_norm();
}

QubitModeVector QubitModeVector::scaled(cplx factor) const {
  return {components_[0].scaled(factor), components_[1].scaled(factor)};
}

cvector QubitModeVector::to_dense() const {
  const int d = mode_dimension();
  cvector out(2 * d);
  out << components_[0].to_dense(), components_[1].to_dense();
  return out;
}

// ---------------------------------------------------------------------------

DensityOperator::DensityOperator(cmatrix matrix, Layout layout, int cutoff,
                                 PolarizationBasis basis)
    : matrix_(std::move(matrix)), layout_(layout), cutoff_(cutoff), basis_(basis) {
  if (matrix_.rows() != matrix_.cols()) throw DimensionError("density matrix must be square");
  Eigen::Index expected = 0;
  switch (layout_) {
    case Layout::Mode: expected = layout::dimension(cutoff); break;
    case Layout::QubitMode: expected = 2 * layout::dimension(cutoff); break;
    case Layout::QubitQubit: expected = 4; break;
  }
  if (matrix_.rows() != expected)
    throw DimensionError("density matrix dimension does not match its layout");
  guard_dense(matrix_.rows());
}

DensityOperator DensityOperator::pure(const TwoModeVector& psi) {
  guard_dense(psi.dimension());
  const cvector v = psi.to_dense();
  return DensityOperator(v * v.adjoint(), Layout::Mode, psi.cutoff(), psi.basis());
}

DensityOperator DensityOperator::pure(const QubitModeVector& psi) {
  guard_dense(2 * psi.mode_dimension());
  const cvector v = psi.to_dense();
  return DensityOperator(v * v.adjoint(), Layout::QubitMode, psi.cutoff(), psi.basis());
}

DensityOperator DensityOperator::qubit_pair(const cmatrix4& rho) {
  return DensityOperator(cmatrix(rho), Layout::QubitQubit, 1);
}

int DensityOperator::mode_dimension() const {
  switch (layout_) {
    case Layout::Mode: return static_cast<int>(matrix_.rows());
    case Layout::QubitMode: return static_cast<int>(matrix_.rows() / 2);
    case Layout::QubitQubit: return 2;
  }
  return 0;
}

DensityOperator DensityOperator::with_gain(double g) const {
  DensityOperator out = *this;
  out.gain_ = g;
  return out;
}

double DensityOperator::trace() const { return matrix_.trace().real(); }

DensityOperator DensityOperator::normalized() const {
  const double tr = trace();
  if (!(tr > 0.0)) throw NonPhysicalState("cannot normalize a state with zero trace");
  DensityOperator out = *this;
  out.matrix_ /= tr;
  return out;
}

double DensityOperator::hermiticity_error() const {
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityOperator::min_eigenvalue() const {
  const cmatrix h = 0.5 * (matrix_ + matrix_.adjoint());
  Eigen::SelfAdjointEigenSolver<cmatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void DensityOperator::check_physical(double tol) const {
  if (hermiticity_error() > tol) throw NonPhysicalState("density matrix is not Hermitian");
  const double lo = min_eigenvalue();
  if (lo < -tol)
    throw NonPhysicalState("density matrix has eigenvalue " + std::to_string(lo));
}

cmatrix DensityOperator::block(int a, int b) const {
  const int d = mode_dimension();
  return matrix_.block(a * d, b * d, d, d);
}

DensityOperator mixture(const std::vector<double>& weights,
                        const std::vector<DensityOperator>& states) {
  if (weights.size() != states.size() || states.empty())
    throw DimensionError("mixture needs one weight per state");
  cmatrix acc = cmatrix::Zero(states[0].dimension(), states[0].dimension());
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].layout() != states[0].layout() || states[i].cutoff() != states[0].cutoff() ||
        !(states[i].basis() == states[0].basis()))
      throw DimensionError("mixture of states over different spaces");
    acc += weights[i] * states[i].matrix();
  }
  return DensityOperator(acc, states[0].layout(), states[0].cutoff(), states[0].basis());
}

namespace {

// Block-diagonal unitary taking storage amplitudes in `from` to `to`.
cmatrix mode_rotation(int cutoff, const PolarizationBasis& from, const PolarizationBasis& to) {
  const int dim = layout::dimension(cutoff);
  cmatrix r = cmatrix::Zero(dim, dim);
  for (int total = 0; total <= cutoff; ++total) {
    const int off = layout::sector_offset(total);
    r.block(off, off, total + 1, total + 1) = rotation_block(from, to, total);
  }
  return r;
}

}  // namespace

DensityOperator rotate_basis(const DensityOperator& rho, const PolarizationBasis& target) {
  if (rho.layout() == DensityOperator::Layout::QubitQubit)
    throw DimensionError("qubit pairs carry no two-mode field to rotate");
  if (rho.basis() == target) return rho;
  const cmatrix r = mode_rotation(rho.cutoff(), rho.basis(), target);
  cmatrix out;
  if (rho.layout() == DensityOperator::Layout::Mode) {
    out = r * rho.matrix() * r.adjoint();
  } else {
    const int d = rho.mode_dimension();
    out.resize(2 * d, 2 * d);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) out.block(a * d, b * d, d, d) = r * rho.block(a, b) * r.adjoint();
  }
  DensityOperator result(out, rho.layout(), rho.cutoff(), target);
  return rho.gain() ? result.with_gain(*rho.gain()) : result;
}

// ---------------------------------------------------------------------------

BranchEnsemble::BranchEnsemble(int cutoff, PolarizationBasis basis)
    : cutoff_(cutoff), basis_(basis) {}

BranchEnsemble BranchEnsemble::pure(const QubitModeVector& psi) {
  BranchEnsemble e(psi.cutoff(), psi.basis());
  e.add(psi);
  return e;
}

void BranchEnsemble::add(QubitModeVector branch) {
  if (branch.cutoff() != cutoff_ || !(branch.basis() == basis_))
    throw DimensionError("branch lives in a different space than the ensemble");
  branches_.push_back(std::move(branch));
}

double BranchEnsemble::trace() const {
  double tr = 0.0;
  for (const auto& b : branches_) tr += b.squared_norm();
  return tr;
}

DensityOperator BranchEnsemble::to_density() const {
  const Eigen::Index dim = 2 * layout::dimension(cutoff_);
  guard_dense(dim);
  cmatrix acc = cmatrix::Zero(dim, dim);
  for (const auto& b : branches_) {
    const cvector v = b.to_dense();
    acc.noalias() += v * v.adjoint();
  }
  DensityOperator rho(acc, DensityOperator::Layout::QubitMode, cutoff_, basis_);
  return gain_ ? rho.with_gain(*gain_) : rho;
}

BranchEnsemble rotate_basis(const BranchEnsemble& rho, const PolarizationBasis& target) {
  BranchEnsemble out(rho.cutoff(), target);
  for (const auto& b : rho.branches())
    out.add(QubitModeVector(rotate_basis(b[0], target), rotate_basis(b[1], target)));
  if (rho.gain()) out.set_gain(*rho.gain());
  return out;
}

// ---------------------------------------------------------------------------

cplx bilinear(const ModeOperator& op, const TwoModeVector& x, const TwoModeVector& y) {
  require_same_space(x, y);
  if (op.rows() != x.dimension()) throw DimensionError("operator and vector dimensions differ");
  const SparseVec oy = op * y.amplitudes();
  return x.amplitudes().dot(oy);
}

cplx trace_product(const ModeOperator& op, const cmatrix& x) {
  if (op.rows() != x.rows() || op.cols() != x.cols())
    throw DimensionError("operator and matrix dimensions differ");
  cplx acc = 0.0;
  for (Eigen::Index k = 0; k < op.outerSize(); ++k)
    for (ModeOperator::InnerIterator it(op, k); it; ++it) acc += it.value() * x(it.col(), it.row());
  return acc;
}

cplx expectation(const DensityOperator& rho, const cmatrix& op) {
  if (op.rows() != rho.dimension() || op.cols() != rho.dimension())
    throw DimensionError("operator and state dimensions differ");
  return (rho.matrix() * op).trace() / rho.trace();
}

cplx expectation(const DensityOperator& rho, const ModeOperator& op) {
  return trace_product(op, rho.matrix()) / rho.trace();
}

}  // namespace micromacro
