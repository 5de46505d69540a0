#include <doctest.h>

#include "micromacro/measurement.hpp"
#include "support.hpp"

using namespace micromacro;

namespace {

double binomial(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

cmatrix commutator(const cmatrix& a, const cmatrix& b) { return a * b - b * a; }

}  // namespace

TEST_CASE("Pauli operators in the canonical bases") {
  const cmatrix2 id = cmatrix2::Identity();
  for (int i = 1; i <= 3; ++i) {
    CHECK((pauli(i) * pauli(i) - id).norm() < 1e-15);
    CHECK(std::abs(pauli(i).trace()) < 1e-15);
  }
  // pauli(1) = Z, pauli(2) = Y, pauli(3) = X: a left-handed triple
  CHECK((commutator(pauli(2), pauli(3)) + 2.0 * kI * pauli(1)).norm() < 1e-14);
  CHECK((commutator(pauli(3), pauli(1)) + 2.0 * kI * pauli(2)).norm() < 1e-14);
}

TEST_CASE("O-Filter effects are complete exactly") {
  for (int k = 0; k <= 10; ++k)
    for (const auto& basis : {PolarizationBasis::hv(), PolarizationBasis::circular()}) {
      const ThresholdPOVM povm(basis, k);
      for (int n = 0; n <= 30; ++n)
        for (int m = 0; m <= 30; ++m) {
          const double s = povm.weight(Outcome::Plus, n, m) + povm.weight(Outcome::Minus, n, m) +
                           povm.weight(Outcome::Inconclusive, n, m);
          REQUIRE(s == 1.0);
        }
    }
}

TEST_CASE("O-Filter threshold rule") {
  const ThresholdPOVM k0(PolarizationBasis::hv(), 0);
  CHECK(k0.weight(Outcome::Plus, 3, 1) == 1.0);
  CHECK(k0.weight(Outcome::Minus, 1, 3) == 1.0);
  CHECK(k0.weight(Outcome::Plus, 2, 2) == 0.5);
  CHECK(k0.weight(Outcome::Minus, 2, 2) == 0.5);
  const ThresholdPOVM k2(PolarizationBasis::hv(), 2);
  CHECK(k2.weight(Outcome::Inconclusive, 4, 2) == 1.0);  // |n - m| = k is a tie
  CHECK(k2.weight(Outcome::Plus, 5, 2) == 1.0);
  CHECK_THROWS_AS(ThresholdPOVM(PolarizationBasis::hv(), -1), DomainError);
}

TEST_CASE("filtering |n+, 0-> depends on the measurement basis") {
  const int n = 10;
  const TwoModeVector plus = TwoModeVector::fock(n, 0, n, PolarizationBasis::diagonal());
  for (int k = 0; k < n; ++k) {
    const OutcomeProbabilities same = ofilter_probabilities(plus, PolarizationBasis::diagonal(), k);
    CHECK(same.conclusive() == doctest::Approx(1.0));
    CHECK(same.plus == doctest::Approx(1.0));

    // n_R ~ Binomial(n, 1/2); conclusive iff |2 n_R - n| > k (half weight on ties at k = 0)
    double oracle = 0.0;
    for (int r = 0; r <= n; ++r) {
      const int d = std::abs(2 * r - n);
      const double w = d > k ? 1.0 : (k == 0 && d == 0 ? 1.0 : 0.0);
      oracle += w * binomial(n, r) / std::pow(2.0, n);
    }
    const OutcomeProbabilities rl = ofilter_probabilities(plus, PolarizationBasis::circular(), k);
    CHECK(rl.conclusive() == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(rl.total() == doctest::Approx(1.0));
  }
}

TEST_CASE("all-inconclusive visibility is undefined") {
  PhotonDistribution vacuum;
  vacuum.probability = Eigen::ArrayXXd::Zero(3, 3);
  vacuum.probability(0, 0) = 1.0;
  const OutcomeProbabilities p = ofilter_probabilities(vacuum, 1);
  CHECK(p.inconclusive == 1.0);
  CHECK_THROWS_AS(visibility(p), UndefinedVisibility);
  CHECK(visibility(OutcomeProbabilities{0.75, 0.25, 0.0}) == doctest::Approx(0.5));
}

TEST_CASE("unamplified photon gives unit visibility in its own basis") {
  CHECK(visibility(0.3, GainParams{0.0}, LossParams{1.0}, 0, {1, 1e-10}) == doctest::Approx(1.0));
}

TEST_CASE("all-click probability matches inclusion-exclusion") {
  for (int detectors : {1, 2, 4, 7}) {
    const Eigen::VectorXd p = all_click_probability(25, detectors);
    for (int n = 0; n <= 25; ++n) {
      double oracle = 0.0;
      for (int j = 0; j <= detectors; ++j)
        oracle += (j % 2 ? -1.0 : 1.0) * binomial(detectors, j) *
                  std::pow(1.0 - double(j) / detectors, n);
      CHECK(p[n] == doctest::Approx(oracle).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("multi-detector outcomes") {
  PhotonDistribution vacuum;
  vacuum.probability = Eigen::ArrayXXd::Zero(4, 4);
  vacuum.probability(0, 0) = 1.0;
  CHECK(multi_detector_probabilities(vacuum, 2).inconclusive == doctest::Approx(1.0));

  const TwoModeVector two = TwoModeVector::fock(2, 0, 3);
  const OutcomeProbabilities p = multi_detector_probabilities(two, PolarizationBasis::hv(), 2);
  CHECK(p.plus == doctest::Approx(0.5));  // both photons in different detectors
  CHECK(p.total() == doctest::Approx(1.0));
}

TEST_CASE("pseudo-Pauli operators act as Pauli matrices on the amplified pair") {
  for (double g : {0.0, 0.5}) {
    const GainParams gain{g};
    const Cutoff cut{required_cutoff(gain, 1e-12), 1e-12};
    ModeOperator s[3];
    for (int i = 0; i < 3; ++i) s[i] = sigma_operator(i + 1, gain, cut).to_sparse();
    CHECK(testing::commutator_defect(s[1], s[2], ModeOperator(-2.0 * kI * s[0])) < 1e-6);
    CHECK(testing::commutator_defect(s[2], s[0], ModeOperator(-2.0 * kI * s[1])) < 1e-6);
    CHECK(testing::commutator_defect(s[0], s[1], ModeOperator(-2.0 * kI * s[2])) < 1e-6);

    const cvector h = hv_macro_qubit(0, gain, cut).to_dense();
    const cvector v = hv_macro_qubit(1, gain, cut).to_dense();
    CHECK((s[0] * h - h).norm() < 1e-12);
    CHECK((s[0] * v + v).norm() < 1e-12);
    // the + amplified state is the +1 eigenvector of Sigma_3
    const cvector plus = (h + v) / std::sqrt(2.0);
    CHECK((s[2] * plus - plus).norm() < 1e-12);
    const PseudoPauliOperator op = sigma_operator(3, gain, cut);
    CHECK(std::abs(bilinear(op, hv_macro_qubit(0, gain, cut), hv_macro_qubit(1, gain, cut)) - 1.0) < 1e-12);
  }
}

TEST_CASE("Stokes operators: eigenvalues and Casimir") {
  const int cutoff = 9;
  const StokesOperators ops = stokes_operators(cutoff);
  for (int i = 0; i < 3; ++i) {
    const PolarizationBasis b = PolarizationBasis::canonical(i + 1);
    const TwoModeVector f = rotate_basis(TwoModeVector::fock(5, 2, cutoff, b), PolarizationBasis::hv(), 0.0);
    const cvector x = f.to_dense();
    CHECK((ops.J[i] * x - 3.0 * x).norm() < 1e-12);
  }
  testing::Gen gen(41);
  const cvector psi = gen.mode_vector(cutoff, PolarizationBasis::hv(), cutoff - 1).to_dense();
  const ModeOperator casimir = ops.J[0] * ops.J[0] + ops.J[1] * ops.J[1] + ops.J[2] * ops.J[2];
  const ModeOperator n2 = ops.N * ops.N + 2.0 * ops.N;
  CHECK((casimir * psi - n2 * psi).norm() < 1e-10);
}

TEST_CASE("diagonal operators: implicit and sparse evaluation agree") {
  testing::Gen gen(42);
  const ThresholdPOVM povm(PolarizationBasis::circular(), 1);
  const DiagonalModeOperator pi = povm.dichotomic(8);
  const TwoModeVector x = gen.mode_vector(8, PolarizationBasis::hv(), 8);
  const TwoModeVector y = gen.mode_vector(8, PolarizationBasis::hv(), 8);
  const cplx sparse = x.to_dense().dot(cvector(pi.to_sparse() * y.to_dense()));
  CHECK(std::abs(bilinear(pi, x, y) - sparse) < 1e-12);
}
