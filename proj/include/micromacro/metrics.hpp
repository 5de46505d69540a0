#pragma once

#include <algorithm>
#include <optional>

#include "micromacro/channels.hpp"

namespace micromacro {

// rho~ = (s_y (x) s_y) rho* (s_y (x) s_y)
template <typename Scalar>
CMatrix4<Scalar> spin_flip(const CMatrix4<Scalar>& rho) {
  CMatrix2<Scalar> sy;
  sy << Scalar(0), Complex<Scalar>(0, -1), Complex<Scalar>(0, 1), Scalar(0);
  CMatrix4<Scalar> yy;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) yy.template block<2, 2>(2 * i, 2 * j) = sy(i, j) * sy;
  return yy * rho.conjugate() * yy;
}

// Wootters concurrence max(0, l1 - l2 - l3 - l4), l_i the decreasing square roots
// of the eigenvalues of sqrt(rho) rho~ sqrt(rho). Eigenvalues are clipped at
// -1e-12 before the square roots.
template <typename Scalar>
Scalar concurrence(const CMatrix4<Scalar>& rho) {
  using std::sqrt;
  const CMatrix4<Scalar> h = (rho + rho.adjoint()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<CMatrix4<Scalar>> es(h);
  const auto clipped = es.eigenvalues().cwiseMax(Scalar(0));
  const CMatrix4<Scalar> root =
      es.eigenvectors() * clipped.cwiseSqrt().template cast<Complex<Scalar>>().asDiagonal() *
      es.eigenvectors().adjoint();
  const CMatrix4<Scalar> m = root * spin_flip(h) * root;
  Eigen::SelfAdjointEigenSolver<CMatrix4<Scalar>> ms((m + m.adjoint()) / Scalar(2),
                                                     Eigen::EigenvaluesOnly);
  std::array<Scalar, 4> l;
  for (int i = 0; i < 4; ++i) {
    Scalar v = ms.eigenvalues()[i];
    if (v < Scalar(-1e-12)) v = Scalar(0);  // tolerated numerical noise
    l[i] = sqrt(std::max(v, Scalar(0)));
  }
  std::sort(l.begin(), l.end(), std::greater<Scalar>());
  return std::max(Scalar(0), l[0] - l[1] - l[2] - l[3]);
}

// Transpose of subsystem A for a state on C^dim_a (x) C^dim_b, index a * dim_b + b.
template <typename Derived>
auto partial_transpose(const Eigen::MatrixBase<Derived>& rho, int dim_a, int dim_b) {
  using Matrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix out(rho.rows(), rho.cols());
  for (int a = 0; a < dim_a; ++a)
    for (int b = 0; b < dim_a; ++b)
      out.block(a * dim_b, b * dim_b, dim_b, dim_b) = rho.block(b * dim_b, a * dim_b, dim_b, dim_b);
  return out;
}

struct ConcurrenceReport {
  double concurrence = 0.0;
  std::optional<double> g;
  std::optional<double> eta;
  std::optional<double> p;
  std::optional<double> t;
  // C / (eta / 2): the surviving fraction of entanglement in the high-gain regime.
  std::optional<double> surviving_fraction;
};

// Throws NonPhysicalState for non-Hermitian input or eigenvalues below -tol.
ConcurrenceReport concurrence_2x2(const DensityOperator& rho, double tol = 1e-9);

double concurrence_from_t(double t);
// (1 - t^2) / (1 + 3 t^2) with t = (1 - eta) Gamma.
double analytic_concurrence(const GainParams& gain, const LossParams& loss);
ConcurrenceReport analytic_concurrence_report(const GainParams& gain, const LossParams& loss);

// S^2 (1 - eta) / (1 + S^2 (1 - eta)) with S = sinh g.
double critical_injection_probability(const GainParams& gain, const LossParams& loss);

// Closed form for the conditioned state with imperfect injection:
//   (p (1-t^2) - (1-p) t S C (1-t^2)) / (p (1+3t^2) + 2 (1-p) t S C (1-t^2))
// for p > p_crit and 0 otherwise.
double concurrence_with_injection(const GainParams& gain, const LossParams& loss,
                                  const InjectionParams& injection);

struct PptReport {
  Eigen::VectorXd eigenvalues;
  double negativity = 0.0;  // sum of |negative eigenvalues|
  bool separable = true;    // exact for 2x2 splits; for larger ones only "not detected"
};

PptReport ppt_test(const cmatrix& rho, int dim_a, int dim_b, double tol = 1e-12);
PptReport ppt_test(const DensityOperator& rho, double tol = 1e-12);

// Smallest p at which the closed-form conditioned state turns NPT, by bisection.
double ppt_critical_injection(const GainParams& gain, const LossParams& loss,
                              double resolution = 1e-10);

}  // namespace micromacro
