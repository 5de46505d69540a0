#include <doctest.h>

#include "support.hpp"

using namespace micromacro;

TEST_CASE("mean photon number of the amplified photon is 1 + 4 sinh^2 g") {
  testing::Gen gen(21);
  for (int trial = 0; trial < 12; ++trial) {
    const GainParams gain{gen.uniform(0.0, 1.5)};
    const int cutoff = required_cutoff(gain, 1e-14);
    const TwoModeVector h = hv_macro_qubit(0, gain, {cutoff, 1e-13});
    const double expected = 1 + 4 * gain.S() * gain.S();
    CHECK(mean_photon_number(gain) == doctest::Approx(expected).epsilon(1e-15));
    CHECK(std::abs(mean_photon_number(h) / expected - 1) < 1e-6);
    // the injected photon's polarization is on top of the amplified pairs
    const MacroQubit q = macro_qubit(gen.uniform(0.0, 2 * kPi), gain, {cutoff, 1e-13});
    CHECK(std::abs(mean_photon_number(q.state) / expected - 1) < 1e-6);
  }
}

TEST_CASE("H/V amplified states match the exponentiated squeezer") {
  const int cutoff = 44;
  for (double g : {0.2, 0.45}) {
    const GainParams gain{g};
    const cmatrix u = testing::squeezer_exponential(g, cutoff);
    const Cutoff cut{cutoff, 1e-6};
    const cvector h = hv_macro_qubit(0, gain, cut).to_dense();
    const cvector v = hv_macro_qubit(1, gain, cut).to_dense();
    const cvector vac = amplified_vacuum(gain, cut).to_dense();
    // compare away from the truncation edge, where the exponential is exact to rounding
    const int inner = layout::dimension(20);
    CHECK((u.col(layout::index(1, 0)).head(inner) - h.head(inner)).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((u.col(layout::index(0, 1)).head(inner) - v.head(inner)).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((u.col(layout::index(0, 0)).head(inner) - vac.head(inner)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("macro-qubit occupies odd pi and even pi-perp numbers only") {
  testing::Gen gen(22);
  for (int trial = 0; trial < 10; ++trial) {
    const double phi = gen.uniform(0.0, 2 * kPi);
    const GainParams gain{gen.uniform(0.05, 1.2)};
    const Cutoff cut{required_cutoff(gain, 1e-10), 1e-10};
    const MacroQubit q = macro_qubit(phi, gain, cut);
    CHECK(q.state.basis() == PolarizationBasis::equatorial(phi));
    for (const auto& [f, a] : q.state.entries()) {
      REQUIRE(f.n % 2 == 1);
      REQUIRE(f.m % 2 == 0);
    }
    // the orthogonal macro-qubit swaps the parities
    const TwoModeVector perp =
        rotate_basis(macro_qubit(phi + kPi, gain, cut).state, PolarizationBasis::equatorial(phi));
    for (const auto& [f, a] : perp.entries()) {
      REQUIRE(f.n % 2 == 0);
      REQUIRE(f.m % 2 == 1);
    }
  }
}

TEST_CASE("equatorial macro-qubit is the superposition of the H and V ones") {
  for (double phi : {0.0, 0.7, kPi / 2, 4.0}) {
    const GainParams gain{0.6};
    const Cutoff cut{required_cutoff(gain, 1e-14), 1e-13};
    const TwoModeVector q = rotate_basis(macro_qubit(phi, gain, cut).state, PolarizationBasis::hv(), 0.0);
    const TwoModeVector sum = (hv_macro_qubit(0, gain, cut) +
                               hv_macro_qubit(1, gain, cut).scaled(std::polar(1.0, phi)))
                                  .scaled(1 / std::sqrt(2.0));
    CHECK((q.to_dense() - sum.to_dense()).norm() < 1e-9);
  }
}

TEST_CASE("tail masses agree with the truncated norms") {
  for (double g : {0.3, 0.9, 1.4})
    for (int n_max : {3, 8, 20, 41}) {
      const GainParams gain{g};
      const double tail = macro_qubit_tail_mass(gain, n_max);
      if (tail > 0.5) continue;
      const MacroQubit q = macro_qubit(0.0, gain, {n_max, 0.9});
      CHECK(q.tail_mass == doctest::Approx(tail));
      CHECK(q.state.squared_norm() + tail == doctest::Approx(1.0).epsilon(1e-12));

      const double vt = amplified_vacuum_tail_mass(gain, n_max);
      double kept = 0.0;
      for (int n = 0; 2 * n <= n_max; ++n) kept += std::pow(gain.Gamma(), 2 * n);
      CHECK(vt == doctest::Approx(1.0 - kept / (gain.C() * gain.C())).epsilon(1e-12));
    }
}

TEST_CASE("required cutoff is the smallest one meeting the tolerance") {
  for (double g : {0.1, 0.8, 1.5})
    for (double tol : {1e-6, 1e-10}) {
      const GainParams gain{g};
      const int n = required_cutoff(gain, tol);
      CHECK(macro_qubit_tail_mass(gain, n) <= tol);
      CHECK(macro_qubit_tail_mass(gain, n - 1) > tol);
    }
  CHECK_THROWS_AS(required_cutoff(GainParams{6.0}, 1e-10, 500), CutoffError);
}

TEST_CASE("a cutoff that drops too much mass is rejected") {
  try {
    macro_qubit(0.0, {1.0}, {10, 1e-10});
    FAIL("expected a CutoffError");
  } catch (const CutoffError& e) {
    CHECK(e.tail_mass() > 1e-10);
    CHECK(e.n_max() == 10);
  }
  CHECK_THROWS_AS(macro_qubit(0.0, {-0.1}, {10, 1e-10}), DomainError);
}

TEST_CASE("micro-macro state is normalized and reduces to the singlet at g = 0") {
  const MicroMacroState zero = micro_macro_state(0.0, {0.0}, {1, 1e-10});
  CHECK(zero.state.squared_norm() == doctest::Approx(1.0));
  // (H (x) V - V (x) H) / sqrt 2 with B in H/V
  CHECK(std::abs(zero.state[0].amplitude({0, 1})) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(std::abs(zero.state[1].amplitude({1, 0})) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(std::abs(zero.state[0].amplitude({0, 1}) + zero.state[1].amplitude({1, 0})) < 1e-15);

  for (double phi : {0.0, 1.1}) {
    const MicroMacroState s = micro_macro_state(phi, {0.7}, {required_cutoff({0.7}, 1e-10), 1e-10});
    CHECK(s.state.squared_norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.ensemble().gain() == doctest::Approx(0.7));
  }
}

TEST_CASE("amplify maps the one-photon inputs onto the amplified states") {
  const GainParams gain{0.4};
  const Cutoff cut{required_cutoff(gain, 1e-12), 1e-12};
  BranchEnsemble in(1);
  QubitModeVector singlet(TwoModeVector::fock(0, 1, 1), TwoModeVector::fock(1, 0, 1).scaled(-1.0));
  in.add(singlet.scaled(1 / std::sqrt(2.0)));
  const BranchEnsemble out = amplify(in, gain, cut);
  REQUIRE(out.size() == 1);
  const QubitModeVector& b = out.branches()[0];
  const TwoModeVector v = hv_macro_qubit(1, gain, cut).scaled(1 / std::sqrt(2.0));
  CHECK((b[0].to_dense() - v.to_dense()).norm() < 1e-10);
  CHECK(out.trace() == doctest::Approx(1.0).epsilon(1e-10));
}
