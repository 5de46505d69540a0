#include "micromacro/metrics.hpp"

#include <cmath>

namespace micromacro {

ConcurrenceReport concurrence_2x2(const DensityOperator& rho, double tol) {
  if (rho.layout() != DensityOperator::Layout::QubitQubit)
    throw DimensionError("concurrence needs a two-qubit state");
  rho.check_physical(tol);
  const cmatrix4 m = rho.normalized().matrix();
  ConcurrenceReport r;
  r.concurrence = concurrence<double>(m);
  return r;
}

double concurrence_from_t(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("attenuation parameter t must lie in [0, 1]");
  return (1 - t * t) / (1 + 3 * t * t);
}

double analytic_concurrence(const GainParams& gain, const LossParams& loss) {
  return concurrence_from_t(attenuation_parameter(gain, loss));
}

ConcurrenceReport analytic_concurrence_report(const GainParams& gain, const LossParams& loss) {
  ConcurrenceReport r;
  r.g = gain.g;
  r.eta = loss.eta;
  r.t = attenuation_parameter(gain, loss);
  r.concurrence = concurrence_from_t(*r.t);
  if (loss.eta > 0.0) r.surviving_fraction = r.concurrence / (loss.eta / 2);
  return r;
}

double critical_injection_probability(const GainParams& gain, const LossParams& loss) {
  gain.validate();
  loss.validate();
  const double x = gain.S() * gain.S() * (1 - loss.eta);
  return x / (1 + x);
}

double concurrence_with_injection(const GainParams& gain, const LossParams& loss,
                                  const InjectionParams& injection) {
  injection.validate();
  const double p = injection.p;
  if (p <= critical_injection_probability(gain, loss)) return 0.0;
  const double t = attenuation_parameter(gain, loss);
  const double t2 = t * t;
  const double mix = (1 - p) * t * gain.S() * gain.C() * (1 - t2);
  return (p * (1 - t2) - mix) / (p * (1 + 3 * t2) + 2 * mix);
}

PptReport ppt_test(const cmatrix& rho, int dim_a, int dim_b, double tol) {
  if (dim_a < 1 || dim_b < 1 || rho.rows() != Eigen::Index(dim_a) * dim_b || rho.cols() != rho.rows())
    throw DimensionError("state dimension does not factor as dim_a * dim_b");
  const cmatrix pt = partial_transpose(rho, dim_a, dim_b);
  Eigen::SelfAdjointEigenSolver<cmatrix> es((pt + pt.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  PptReport r;
  r.eigenvalues = es.eigenvalues();
  for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i)
    if (r.eigenvalues[i] < 0.0) r.negativity -= r.eigenvalues[i];
  r.separable = r.eigenvalues.minCoeff() >= -tol;
  return r;
}

PptReport ppt_test(const DensityOperator& rho, double tol) {
  const DensityOperator n = rho.normalized();
  switch (rho.layout()) {
    case DensityOperator::Layout::QubitQubit: return ppt_test(n.matrix(), 2, 2, tol);
    case DensityOperator::Layout::QubitMode: return ppt_test(n.matrix(), 2, rho.mode_dimension(), tol);
    case DensityOperator::Layout::Mode: break;
  }
  throw DimensionError("PPT test needs a bipartite state");
}

double ppt_critical_injection(const GainParams& gain, const LossParams& loss, double resolution) {
  auto entangled = [&](double p) {
    return !ppt_test(attenuated_state_with_injection({p}, gain, loss)).separable;
  };
  if (!entangled(1.0)) return 1.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    (entangled(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace micromacro
