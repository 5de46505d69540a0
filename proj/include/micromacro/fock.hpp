#pragma once

#include <compare>
#include <functional>
#include <map>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "micromacro/types.hpp"

namespace micromacro {

// |n, m> : n photons in the first polarization mode of a basis, m in the second.
struct FockIndex {
  int n = 0;
  int m = 0;

  int total() const noexcept { return n + m; }
  auto operator<=>(const FockIndex&) const = default;
};

// Two-mode Fock states with n + m <= cutoff are laid out by total photon
// number N, and inside each N-sector by the second-mode count m:
//   index(n, m) = N (N + 1) / 2 + m.
// The layout does not depend on the cutoff, so a vector truncated at a
// smaller cutoff is a prefix of one truncated at a larger cutoff.
namespace layout {

constexpr int sector_offset(int total) noexcept { return total * (total + 1) / 2; }
constexpr int dimension(int cutoff) noexcept { return (cutoff + 1) * (cutoff + 2) / 2; }
constexpr int index(int n, int m) noexcept { return sector_offset(n + m) + m; }
constexpr int index(FockIndex f) noexcept { return index(f.n, f.m); }
FockIndex fock_index(int index);

}  // namespace layout

// Truncation of the two-mode space. n_max bounds the total photon number n + m,
// which every passive polarization rotation conserves.
struct Cutoff {
  int n_max = 1;
  double tail_tolerance = 1e-10;

  void validate() const;
};

// Amplitudes with |a| below this are not stored in sparse vectors.
inline constexpr double kDropThreshold = 1e-14;

// A pair of orthogonal polarization modes. HV is the storage basis of the
// library; equatorial bases are pi_phi = (H + e^{i phi} V)/sqrt2 together with
// pi_phi_perp = (H - e^{i phi} V)/sqrt2.
class PolarizationBasis {
 public:
  enum class Kind { HV, Equatorial };

  static PolarizationBasis hv() { return PolarizationBasis(Kind::HV, 0.0); }
  static PolarizationBasis equatorial(double phi);
  static PolarizationBasis diagonal() { return equatorial(0.0); }     // {+,-}
  static PolarizationBasis circular() { return equatorial(kPi / 2); }  // {R,L}
  // 1 -> {H,V}, 2 -> {R,L}, 3 -> {+,-}
  static PolarizationBasis canonical(int index);

  Kind kind() const noexcept { return kind_; }
  // Phase in [0, 2pi); zero for HV.
  double phase() const noexcept { return phase_; }
  // Rows are the polarization (Jones) vectors of the two modes in H/V components.
  cmatrix2 modes() const;

  // Phases closer than 1e-12 rad (on the circle) name the same basis.
  bool operator==(const PolarizationBasis& other) const {
    if (kind_ != other.kind_) return false;
    const double d = std::abs(phase_ - other.phase_);
    return std::min(d, 2 * kPi - d) < 1e-12;
  }

 private:
  PolarizationBasis(Kind kind, double phase) : kind_(kind), phase_(phase) {}

  Kind kind_;
  double phase_;
};

std::string to_string(const PolarizationBasis& basis);

// Passive transformation restricted to the N-photon sector. Column j holds
// |N - j, j> of `from` expanded over |N - k, k> of `to` (row k). Blocks are
// computed once per (from, to, N) and shared between threads.
const cmatrix& rotation_block(const PolarizationBasis& from, const PolarizationBasis& to,
                              int total);

class TwoModeVector {
 public:
  TwoModeVector(int cutoff, PolarizationBasis basis = PolarizationBasis::hv());

  static TwoModeVector fock(int n, int m, int cutoff,
                            PolarizationBasis basis = PolarizationBasis::hv());
  static TwoModeVector from_dense(const cvector& dense, int cutoff, PolarizationBasis basis,
                                  double drop = kDropThreshold);

  int cutoff() const noexcept { return cutoff_; }
  int dimension() const noexcept { return layout::dimension(cutoff_); }
  const PolarizationBasis& basis() const noexcept { return basis_; }
  const SparseVec& amplitudes() const noexcept { return amplitudes_; }
  SparseVec& amplitudes() noexcept { return amplitudes_; }

  cplx amplitude(FockIndex f) const;
  void set(FockIndex f, cplx value);
  void add(FockIndex f, cplx value);

  std::map<FockIndex, cplx> entries() const;
  cvector to_dense() const;

  double squared_norm() const;
  TwoModeVector normalized() const;
  TwoModeVector scaled(cplx factor) const;
  void prune(double drop = kDropThreshold);

  // Same amplitudes embedded in (or cut down to) a different cutoff.
  TwoModeVector with_cutoff(int cutoff) const;

 private:
  int cutoff_;
  PolarizationBasis basis_;
  SparseVec amplitudes_;
};

cplx inner(const TwoModeVector& bra, const TwoModeVector& ket);
TwoModeVector operator+(const TwoModeVector& a, const TwoModeVector& b);

TwoModeVector rotate_basis(const TwoModeVector& state, const PolarizationBasis& target,
                           double drop = kDropThreshold);

std::map<FockIndex, double> photon_distribution(const TwoModeVector& state,
                                                const PolarizationBasis& basis);

// Joint photon-number distribution P(n, m) in a fixed basis, stored densely
// with per-mode extent n_max + 1.
struct PhotonDistribution {
  Eigen::ArrayXXd probability;
  PolarizationBasis basis = PolarizationBasis::hv();

  int n_max() const { return static_cast<int>(probability.rows()) - 1; }
  double total() const { return probability.sum(); }
};

PhotonDistribution distribution_in_basis(const TwoModeVector& state,
                                         const PolarizationBasis& basis);

// Probability mass per total photon number N = n + m.
Eigen::VectorXd total_number_distribution(const TwoModeVector& state);
double mean_photon_number(const TwoModeVector& state);

// Operators on the two-mode space of a given cutoff, expressed in `storage`.
ModeOperator number_operator(int cutoff);
ModeOperator diagonal_operator(int cutoff, const PolarizationBasis& storage,
                               const PolarizationBasis& eigenbasis,
                               const std::function<double(int, int)>& eigenvalue);

}  // namespace micromacro
