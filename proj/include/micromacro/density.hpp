#pragma once

#include <optional>
#include <vector>

#include "micromacro/error.hpp"
#include "micromacro/fock.hpp"

namespace micromacro {

// Pure state of a polarization qubit A and a two-mode field B, stored as the
// two B-vectors (<H|_A (x) 1)|psi> and (<V|_A (x) 1)|psi>.
class QubitModeVector {
 public:
  QubitModeVector(TwoModeVector h, TwoModeVector v);
  explicit QubitModeVector(int cutoff, PolarizationBasis basis = PolarizationBasis::hv());

  const TwoModeVector& operator[](int a) const { return components_[a]; }
  TwoModeVector& operator[](int a) { return components_[a]; }

  int cutoff() const noexcept { return components_[0].cutoff(); }
  int mode_dimension() const noexcept { return components_[0].dimension(); }
  const PolarizationBasis& basis() const noexcept { return components_[0].basis(); }

  double squared_norm() const;
  QubitModeVector scaled(cplx factor) const;
  // Index a * D + b with D the two-mode dimension.
  cvector to_dense() const;

 private:
  std::vector<TwoModeVector> components_;
};

inline constexpr int kMaxDenseDimension = 4096;

class DensityOperator {
 public:
  enum class Layout {
    Mode,        // two-mode field alone
    QubitMode,   // qubit A (x) two-mode field B, index a * D + b
    QubitQubit,  // 4x4 in the order HH, HV, VH, VV
  };

  DensityOperator(cmatrix matrix, Layout layout, int cutoff,
                  PolarizationBasis basis = PolarizationBasis::hv());

  static DensityOperator pure(const TwoModeVector& psi);
  static DensityOperator pure(const QubitModeVector& psi);
  static DensityOperator qubit_pair(const cmatrix4& rho);

  const cmatrix& matrix() const noexcept { return matrix_; }
  Layout layout() const noexcept { return layout_; }
  int cutoff() const noexcept { return cutoff_; }
  const PolarizationBasis& basis() const noexcept { return basis_; }
  int mode_dimension() const;
  Eigen::Index dimension() const noexcept { return matrix_.rows(); }

  // Amplifier gain the state was produced with, when known.
  std::optional<double> gain() const noexcept { return gain_; }
  DensityOperator with_gain(double g) const;

  double trace() const;
  DensityOperator normalized() const;
  double hermiticity_error() const;
  double min_eigenvalue() const;
  // Throws NonPhysicalState if not Hermitian or has eigenvalues below -tol.
  void check_physical(double tol = 1e-9) const;

  // Block <a|rho|b> over B for the QubitMode layout.
  cmatrix block(int a, int b) const;

 private:
  cmatrix matrix_;
  Layout layout_;
  int cutoff_;
  PolarizationBasis basis_;
  std::optional<double> gain_;
};

DensityOperator mixture(const std::vector<double>& weights,
                        const std::vector<DensityOperator>& states);

// Re-expresses the B modes in another polarization basis.
DensityOperator rotate_basis(const DensityOperator& rho, const PolarizationBasis& target);

// Mixed state on A (x) B as sum_k |chi_k><chi_k| over unnormalized branches.
// Large truncations stay affordable because every branch is sparse.
class BranchEnsemble {
 public:
  explicit BranchEnsemble(int cutoff, PolarizationBasis basis = PolarizationBasis::hv());
  static BranchEnsemble pure(const QubitModeVector& psi);

  void add(QubitModeVector branch);
  const std::vector<QubitModeVector>& branches() const noexcept { return branches_; }
  int cutoff() const noexcept { return cutoff_; }
  const PolarizationBasis& basis() const noexcept { return basis_; }
  std::size_t size() const noexcept { return branches_.size(); }

  std::optional<double> gain() const noexcept { return gain_; }
  void set_gain(double g) { gain_ = g; }

  double trace() const;
  DensityOperator to_density() const;

 private:
  int cutoff_;
  PolarizationBasis basis_;
  std::vector<QubitModeVector> branches_;
  std::optional<double> gain_;
};

BranchEnsemble rotate_basis(const BranchEnsemble& rho, const PolarizationBasis& target);

// <x| op |y> and Tr(op X) for operators acting on the two-mode field. Further
// overloads for structured operators live next to those operator types.
cplx bilinear(const ModeOperator& op, const TwoModeVector& x, const TwoModeVector& y);
cplx trace_product(const ModeOperator& op, const cmatrix& x);

cplx expectation(const DensityOperator& rho, const cmatrix& op);
cplx expectation(const DensityOperator& rho, const ModeOperator& op);

// Tr(rho (a (x) b)) / Tr(rho) with a acting on qubit A in H/V components.
template <typename ModeOp>
cplx local_expectation(const DensityOperator& rho, const cmatrix2& a, const ModeOp& b) {
  if (rho.layout() != DensityOperator::Layout::QubitMode)
    throw DimensionError("local expectation needs a qubit (x) mode state");
  cplx acc = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (a(i, j) != cplx(0.0)) acc += a(i, j) * trace_product(b, rho.block(j, i));
  return acc / rho.trace();
}

template <typename ModeOp>
cplx local_expectation(const BranchEnsemble& rho, const cmatrix2& a, const ModeOp& b) {
  cplx acc = 0.0;
  for (const auto& chi : rho.branches())
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (a(i, j) != cplx(0.0)) acc += a(i, j) * bilinear(b, chi[i], chi[j]);
  return acc / rho.trace();
}

}  // namespace micromacro
