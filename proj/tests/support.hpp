#pragma once

// Shared generators and independent oracles for the test binaries.

#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "micromacro/amplifier.hpp"
#include "micromacro/channels.hpp"
#include "micromacro/density.hpp"
#include "micromacro/fock.hpp"

namespace testing {

using namespace micromacro;

// Seeded so every run draws the same cases.
class Gen {
 public:
  explicit Gen(std::uint64_t seed = 0x5eed) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  cplx normal_complex() {
    std::normal_distribution<double> n;
    return {n(engine_), n(engine_)};
  }

  // HV or an equatorial basis at a random phase, sometimes one of the canonical ones.
  PolarizationBasis basis() {
    switch (integer(0, 4)) {
      case 0: return PolarizationBasis::hv();
      case 1: return PolarizationBasis::diagonal();
      case 2: return PolarizationBasis::circular();
      default: return PolarizationBasis::equatorial(uniform(0.0, 2 * kPi));
    }
  }

  // Random normalized vector supported on total photon numbers <= support.
  TwoModeVector mode_vector(int cutoff, PolarizationBasis basis, int support) {
    TwoModeVector v(cutoff, basis);
    for (int total = 0; total <= std::min(support, cutoff); ++total)
      for (int m = 0; m <= total; ++m) v.set({total - m, m}, normal_complex());
    return v.normalized();
  }

  QubitModeVector qubit_mode_vector(int cutoff, PolarizationBasis basis, int support) {
    QubitModeVector v(mode_vector(cutoff, basis, support), mode_vector(cutoff, basis, support));
    return v.scaled(1.0 / std::sqrt(v.squared_norm()));
  }

  cmatrix random_density(int dim, int rank) {
    cmatrix g(dim, rank);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < rank; ++j) g(i, j) = normal_complex();
    cmatrix rho = g * g.adjoint();
    return rho / rho.trace();
  }

 private:
  std::mt19937_64 engine_;
};

// Amplitude of |p, q>_B inside |n, m>_A, by expanding
// (a+_{A,0})^n (a+_{A,1})^m with a+_{A,x} = sum_y <B_y|A_x> a+_{B,y}.
inline cplx binomial_rotation_amplitude(const PolarizationBasis& from, const PolarizationBasis& to,
                                        int n, int m, int p) {
  const cmatrix2 w = from.modes() * to.modes().adjoint();
  auto lf = [](int k) { return std::lgamma(k + 1.0); };
  cplx sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const int j = p - i;
    if (j < 0 || j > m) continue;
    const double log_binom = lf(n) - lf(i) - lf(n - i) + lf(m) - lf(j) - lf(m - j);
    sum += std::exp(log_binom) * std::pow(w(0, 0), i) * std::pow(w(0, 1), n - i) *
           std::pow(w(1, 0), j) * std::pow(w(1, 1), m - j);
  }
  const int q = n + m - p;
  return sum * std::exp(0.5 * (lf(p) + lf(q) - lf(n) - lf(m)));
}

// exp(g (a+ b+ - a b)) on the truncated H/V space, as a dense matrix.
inline cmatrix squeezer_exponential(double g, int cutoff) {
  const int dim = layout::dimension(cutoff);
  cmatrix k = cmatrix::Zero(dim, dim);
  for (int total = 0; total + 2 <= cutoff; ++total)
    for (int m = 0; m <= total; ++m) {
      const int n = total - m;
      const double c = std::sqrt((n + 1.0) * (m + 1.0));
      const int lo = layout::index(n, m), hi = layout::index(n + 1, m + 1);
      k(hi, lo) += c;
      k(lo, hi) -= c;
    }
  return (g * k).exp();
}

inline double max_abs_diff(const cmatrix& a, const cmatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline double max_abs(const ModeOperator& a) {
  double m = 0.0;
  for (int k = 0; k < a.outerSize(); ++k)
    for (ModeOperator::InnerIterator it(a, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

// max |[a, b] - c| entrywise
inline double commutator_defect(const ModeOperator& a, const ModeOperator& b, const ModeOperator& c) {
  const ModeOperator d = ModeOperator(a * b) - ModeOperator(b * a) - c;
  return max_abs(d);
}

}  // namespace testing
