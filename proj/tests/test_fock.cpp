#include <doctest.h>

#include "support.hpp"

using namespace micromacro;

TEST_CASE("layout index round-trips and is ordered by total photon number") {
  int expected = 0;
  for (int total = 0; total <= 60; ++total)
    for (int m = 0; m <= total; ++m) {
      const FockIndex f{total - m, m};
      REQUIRE(layout::index(f) == expected++);
      REQUIRE(layout::fock_index(layout::index(f)) == f);
    }
  CHECK(layout::dimension(60) == expected);
}

TEST_CASE("rotation blocks agree with the binomial expansion") {
  testing::Gen gen(11);
  for (int trial = 0; trial < 40; ++trial) {
    const PolarizationBasis from = gen.basis();
    const PolarizationBasis to = gen.basis();
    const int total = gen.integer(0, 24);
    const cmatrix& w = rotation_block(from, to, total);
    for (int m = 0; m <= total; ++m)
      for (int q = 0; q <= total; ++q) {
        const cplx oracle = testing::binomial_rotation_amplitude(from, to, total - m, m, total - q);
        REQUIRE(std::abs(w(q, m) - oracle) < 1e-10);
      }
  }
}

TEST_CASE("rotation blocks are unitary") {
  testing::Gen gen(12);
  for (int trial = 0; trial < 30; ++trial) {
    const PolarizationBasis from = gen.basis();
    const PolarizationBasis to = gen.basis();
    const int total = trial < 25 ? gen.integer(0, 40) : gen.integer(200, 500);
    const cmatrix& w = rotation_block(from, to, total);
    const cmatrix id = cmatrix::Identity(total + 1, total + 1);
    CHECK(testing::max_abs_diff(w.adjoint() * w, id) < 1e-12);
  }
}

TEST_CASE("rotating forth and back is the identity") {
  testing::Gen gen(13);
  for (int trial = 0; trial < 20; ++trial) {
    const PolarizationBasis a = gen.basis(), b = gen.basis();
    const TwoModeVector psi = gen.mode_vector(18, a, 18);
    const TwoModeVector back = rotate_basis(rotate_basis(psi, b, 0.0), a, 0.0);
    CHECK((back.to_dense() - psi.to_dense()).norm() < 1e-12);
    CHECK(rotate_basis(psi, b).squared_norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("|10+, 0-> is a point mass in {+,-} and binomial in {R,L}") {
  const TwoModeVector plus = TwoModeVector::fock(10, 0, 10, PolarizationBasis::diagonal());
  const PhotonDistribution same = distribution_in_basis(plus, PolarizationBasis::diagonal());
  CHECK(same.probability(10, 0) == doctest::Approx(1.0));
  CHECK(same.total() == doctest::Approx(1.0));

  const PhotonDistribution rl = distribution_in_basis(plus, PolarizationBasis::circular());
  for (int n = 0; n <= 10; ++n) {
    const double binomial = std::tgamma(11.0) / (std::tgamma(n + 1.0) * std::tgamma(11.0 - n)) /
                            1024.0;
    CHECK(rl.probability(n, 10 - n) == doctest::Approx(binomial).epsilon(1e-12));
  }
}

TEST_CASE("H and V photons split evenly in every equatorial basis") {
  const TwoModeVector h = TwoModeVector::fock(1, 0, 1);
  for (double phi : {0.0, 0.4, kPi / 2, 2.5}) {
    const auto d = photon_distribution(h, PolarizationBasis::equatorial(phi));
    CHECK(d.at({1, 0}) == doctest::Approx(0.5));
    CHECK(d.at({0, 1}) == doctest::Approx(0.5));
  }
}

TEST_CASE("canonical bases and labels") {
  CHECK(PolarizationBasis::canonical(1) == PolarizationBasis::hv());
  CHECK(PolarizationBasis::canonical(2) == PolarizationBasis::circular());
  CHECK(PolarizationBasis::canonical(3) == PolarizationBasis::diagonal());
  CHECK(to_string(PolarizationBasis::circular()) == "RL");
  CHECK(to_string(PolarizationBasis::diagonal()) == "+-");
  CHECK(PolarizationBasis::equatorial(2 * kPi + 0.1) == PolarizationBasis::equatorial(0.1));
  CHECK_THROWS_AS(PolarizationBasis::canonical(4), DomainError);
}

TEST_CASE("number operator and diagonal operators") {
  const ModeOperator n = number_operator(6);
  for (int i = 0; i < layout::dimension(6); ++i)
    CHECK(n.coeff(i, i).real() == doctest::Approx(layout::fock_index(i).total()));

  const auto diff = [](int a, int b) { return double(a - b); };
  const ModeOperator j = diagonal_operator(8, PolarizationBasis::hv(), PolarizationBasis::circular(), diff);
  const TwoModeVector r = rotate_basis(TwoModeVector::fock(5, 2, 8, PolarizationBasis::circular()),
                                       PolarizationBasis::hv(), 0.0);
  const cvector image = j * r.to_dense();
  CHECK((image - 3.0 * r.to_dense()).norm() < 1e-12);
}

TEST_CASE("mean photon number and total-number distribution") {
  TwoModeVector psi(6);
  psi.set({2, 1}, std::sqrt(0.5));
  psi.set({0, 0}, std::sqrt(0.5));
  CHECK(mean_photon_number(psi) == doctest::Approx(1.5));
  const Eigen::VectorXd p = total_number_distribution(psi);
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[3] == doctest::Approx(0.5));
}

TEST_CASE("space mismatches are rejected") {
  const TwoModeVector a = TwoModeVector::fock(1, 0, 4);
  const TwoModeVector b = TwoModeVector::fock(1, 0, 4, PolarizationBasis::diagonal());
  const TwoModeVector c = TwoModeVector::fock(1, 0, 5);
  CHECK_THROWS_AS(inner(a, b), DimensionError);
  CHECK_THROWS_AS(a + c, DimensionError);
  CHECK_THROWS_AS(TwoModeVector::fock(3, 3, 4), DimensionError);
  CHECK_THROWS_AS((Cutoff{0}.validate()), DomainError);
  CHECK_THROWS_AS((Cutoff{10, 0.0}.validate()), DomainError);
}
