#include "micromacro/fock.hpp"

#include <cmath>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <tuple>

#include "micromacro/error.hpp"

namespace micromacro {

FockIndex layout::fock_index(int index) {
  if (index < 0) throw DimensionError("negative Fock layout index");
  int total = static_cast<int>((std::sqrt(8.0 * index + 1.0) - 1.0) / 2.0);
  while (sector_offset(total + 1) <= index) ++total;
  while (sector_offset(total) > index) --total;
  const int m = index - sector_offset(total);
  return {total - m, m};
}

void Cutoff::validate() const {
  if (n_max < 1) throw DomainError("cutoff n_max must be >= 1");
  if (!(tail_tolerance > 0.0 && tail_tolerance < 1.0))
    throw DomainError("tail tolerance must lie in (0, 1)");
}

// ---------------------------------------------------------------------------
// Polarization bases

PolarizationBasis PolarizationBasis::equatorial(double phi) {
  if (!std::isfinite(phi)) throw DomainError("basis phase must be finite");
  double p = std::fmod(phi, 2 * kPi);
  if (p < 0) p += 2 * kPi;
  if (2 * kPi - p < 1e-15) p = 0.0;
  return PolarizationBasis(Kind::Equatorial, p);
}

PolarizationBasis PolarizationBasis::canonical(int index) {
  switch (index) {
    case 1: return hv();
    case 2: return circular();
    case 3: return diagonal();
    default: throw DomainError("canonical basis index must be 1, 2 or 3");
  }
}

cmatrix2 PolarizationBasis::modes() const {
  cmatrix2 u;
  if (kind_ == Kind::HV) {
    u.setIdentity();
    return u;
  }
  const double s = 1.0 / std::sqrt(2.0);
  const cplx e = std::polar(1.0, phase_);
  u << s, s * e, s, -s * e;
  return u;
}

std::string to_string(const PolarizationBasis& basis) {
  if (basis.kind() == PolarizationBasis::Kind::HV) return "HV";
  if (basis == PolarizationBasis::diagonal()) return "+-";
  if (basis == PolarizationBasis::circular()) return "RL";
  std::ostringstream os;
  os.precision(17);
  os << "phi=" << basis.phase();
  return os.str();
}

// ---------------------------------------------------------------------------
// Rotation blocks

namespace {

using BasisKey = std::tuple<int, double, int, double>;

BasisKey make_key(const PolarizationBasis& from, const PolarizationBasis& to) {
  return {static_cast<int>(from.kind()), from.phase(), static_cast<int>(to.kind()), to.phase()};
}

// Write-once-read-many: blocks are appended under the exclusive lock and never
// modified afterwards. std::deque keeps references stable across push_back.
struct RotationCache {
  std::shared_mutex mutex;
  std::map<BasisKey, std::deque<cmatrix>> blocks;
};

RotationCache& rotation_cache() {
  static RotationCache cache;
  return cache;
}

// Sector N from sector N - 1. Both creation operators reach |n, m>_X:
//   N |n, m>_X = sqrt(n) b+_{X,0} |n-1, m>_X + sqrt(m) b+_{X,1} |n, m-1>_X,
// and averaging the two paths keeps the recursion stable for large N.
cmatrix next_block(const cmatrix& prev, const cmatrix2& w, int total) {
  cmatrix out = cmatrix::Zero(total + 1, total + 1);
  // adds weight * b+_{X,x} applied to column prev_col of sector N - 1
  auto raise = [&](int prev_col, int x, double weight, int col) {
    const cplx w0 = weight * w(x, 0), w1 = weight * w(x, 1);
    for (int k = 0; k < total; ++k) {
      const cplx c = prev(k, prev_col);
      // b+_{Y,0} |N-1-k, k> = sqrt(N-k) |N-k, k>; b+_{Y,1} raises k.
      out(k, col) += w0 * std::sqrt(static_cast<double>(total - k)) * c;
      out(k + 1, col) += w1 * std::sqrt(static_cast<double>(k + 1)) * c;
    }
  };
  for (int j = 0; j <= total; ++j) {
    if (j < total) raise(j, 0, std::sqrt(double(total - j)) / total, j);
    if (j > 0) raise(j - 1, 1, std::sqrt(double(j)) / total, j);
  }
  return out;
}

}  // namespace

const cmatrix& rotation_block(const PolarizationBasis& from, const PolarizationBasis& to,
                              int total) {
  if (total < 0) throw DimensionError("negative photon number sector");
  auto& cache = rotation_cache();
  const BasisKey key = make_key(from, to);
  {
    std::shared_lock lock(cache.mutex);
    auto it = cache.blocks.find(key);
    if (it != cache.blocks.end() && static_cast<int>(it->second.size()) > total)
      return it->second[total];
  }
  std::unique_lock lock(cache.mutex);
  auto& blocks = cache.blocks[key];
  if (blocks.empty()) blocks.push_back(cmatrix::Identity(1, 1));
  const cmatrix2 w = from.modes() * to.modes().adjoint();
  while (static_cast<int>(blocks.size()) <= total) {
    const int n = static_cast<int>(blocks.size());
    blocks.push_back(next_block(blocks.back(), w, n));
  }
  return blocks[total];
}

// ---------------------------------------------------------------------------
// TwoModeVector

TwoModeVector::TwoModeVector(int cutoff, PolarizationBasis basis)
    : cutoff_(cutoff), basis_(basis), amplitudes_(layout::dimension(cutoff)) {
  if (cutoff < 0) throw DomainError("cutoff must be non-negative");
}

TwoModeVector TwoModeVector::fock(int n, int m, int cutoff, PolarizationBasis basis) {
  TwoModeVector v(cutoff, basis);
  v.set({n, m}, 1.0);
  return v;
}

TwoModeVector TwoModeVector::from_dense(const cvector& dense, int cutoff,
                                        PolarizationBasis basis, double drop) {
  TwoModeVector v(cutoff, basis);
  if (dense.size() != v.dimension()) throw DimensionError("dense vector has wrong dimension");
  for (Eigen::Index i = 0; i < dense.size(); ++i)
    if (std::abs(dense[i]) >= drop && dense[i] != cplx(0.0))
      v.amplitudes_.insert(i) = dense[i];
  return v;
}

namespace {
void check_index(FockIndex f, int cutoff) {
  if (f.n < 0 || f.m < 0) throw DimensionError("negative photon number");
  if (f.total() > cutoff) throw DimensionError("Fock index exceeds cutoff");
}
}  // namespace

cplx TwoModeVector::amplitude(FockIndex f) const {
  if (f.n < 0 || f.m < 0 || f.total() > cutoff_) return 0.0;
  return amplitudes_.coeff(layout::index(f));
}

void TwoModeVector::set(FockIndex f, cplx value) {
  check_index(f, cutoff_);
  amplitudes_.coeffRef(layout::index(f)) = value;
}

void TwoModeVector::add(FockIndex f, cplx value) {
  check_index(f, cutoff_);
  amplitudes_.coeffRef(layout::index(f)) += value;
}

std::map<FockIndex, cplx> TwoModeVector::entries() const {
  std::map<FockIndex, cplx> out;
  for (SparseVec::InnerIterator it(amplitudes_); it; ++it)
    out.emplace(layout::fock_index(static_cast<int>(it.index())), it.value());
  return out;
}

cvector TwoModeVector::to_dense() const { return cvector(amplitudes_); }

double TwoModeVector::squared_norm() const { return amplitudes_.squaredNorm(); }

TwoModeVector TwoModeVector::normalized() const {
  const double n2 = squared_norm();
  if (n2 <= 0.0) throw NonPhysicalState("cannot normalize a zero vector");
  return scaled(1.0 / std::sqrt(n2));
}

TwoModeVector TwoModeVector::scaled(cplx factor) const {
  TwoModeVector v = *this;
  v.amplitudes_ *= factor;
  return v;
}

void TwoModeVector::prune(double drop) {
  amplitudes_.prune(cplx(1.0), drop);  // drops |a| <= drop
}

TwoModeVector TwoModeVector::with_cutoff(int cutoff) const {
  TwoModeVector v(cutoff, basis_);
  const int dim = v.dimension();
  for (SparseVec::InnerIterator it(amplitudes_); it; ++it)
    if (it.index() < dim) v.amplitudes_.insert(it.index()) = it.value();
  return v;
}

cplx inner(const TwoModeVector& bra, const TwoModeVector& ket) {
  if (!(bra.basis() == ket.basis())) throw DimensionError("inner product across bases");
  if (bra.cutoff() != ket.cutoff()) throw DimensionError("inner product across cutoffs");
  return bra.amplitudes().dot(ket.amplitudes());
}

TwoModeVector operator+(const TwoModeVector& a, const TwoModeVector& b) {
  if (!(a.basis() == b.basis()) || a.cutoff() != b.cutoff())
    throw DimensionError("sum of vectors over different spaces");
  TwoModeVector out = a;
  out.amplitudes() = a.amplitudes() + b.amplitudes();
  return out;
}

TwoModeVector rotate_basis(const TwoModeVector& state, const PolarizationBasis& target,
                           double drop) {
  if (state.basis() == target) return state;
  cvector out = cvector::Zero(state.dimension());
  for (SparseVec::InnerIterator it(state.amplitudes()); it; ++it) {
    const FockIndex f = layout::fock_index(static_cast<int>(it.index()));
    const int total = f.total();
    const cmatrix& block = rotation_block(state.basis(), target, total);
    out.segment(layout::sector_offset(total), total + 1) += it.value() * block.col(f.m);
  }
  return TwoModeVector::from_dense(out, state.cutoff(), target, drop);
}

std::map<FockIndex, double> photon_distribution(const TwoModeVector& state,
                                                const PolarizationBasis& basis) {
  std::map<FockIndex, double> out;
  for (const auto& [f, a] : rotate_basis(state, basis).entries()) out[f] = std::norm(a);
  return out;
}

PhotonDistribution distribution_in_basis(const TwoModeVector& state,
                                         const PolarizationBasis& basis) {
  PhotonDistribution d;
  d.basis = basis;
  d.probability = Eigen::ArrayXXd::Zero(state.cutoff() + 1, state.cutoff() + 1);
  const TwoModeVector rotated = rotate_basis(state, basis);
  for (SparseVec::InnerIterator it(rotated.amplitudes()); it; ++it) {
    const FockIndex f = layout::fock_index(static_cast<int>(it.index()));
    d.probability(f.n, f.m) += std::norm(it.value());
  }
  return d;
}

Eigen::VectorXd total_number_distribution(const TwoModeVector& state) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(state.cutoff() + 1);
  for (SparseVec::InnerIterator it(state.amplitudes()); it; ++it)
    p[layout::fock_index(static_cast<int>(it.index())).total()] += std::norm(it.value());
  return p;
}

double mean_photon_number(const TwoModeVector& state) {
  const Eigen::VectorXd p = total_number_distribution(state);
  return (p.array() * Eigen::VectorXd::LinSpaced(p.size(), 0, p.size() - 1).array()).sum() /
         p.sum();
}

// ---------------------------------------------------------------------------
// Operators

ModeOperator number_operator(int cutoff) {
  const int dim = layout::dimension(cutoff);
  ModeOperator op(dim, dim);
  op.reserve(Eigen::VectorXi::Constant(dim, 1));
  for (int i = 0; i < dim; ++i) {
    const int total = layout::fock_index(i).total();
    if (total != 0) op.insert(i, i) = static_cast<double>(total);
  }
  op.makeCompressed();
  return op;
}

ModeOperator diagonal_operator(int cutoff, const PolarizationBasis& storage,
                               const PolarizationBasis& eigenbasis,
                               const std::function<double(int, int)>& eigenvalue) {
  const int dim = layout::dimension(cutoff);
  std::vector<Eigen::Triplet<cplx>> triplets;
  for (int total = 0; total <= cutoff; ++total) {
    const cmatrix& r = rotation_block(storage, eigenbasis, total);
    Eigen::VectorXd f(total + 1);
    for (int k = 0; k <= total; ++k) f[k] = eigenvalue(total - k, k);
    const cmatrix block = r.adjoint() * f.asDiagonal() * r;
    const int off = layout::sector_offset(total);
    for (int j = 0; j <= total; ++j)
      for (int i = 0; i <= total; ++i)
        if (std::abs(block(i, j)) > 1e-15) triplets.emplace_back(off + i, off + j, block(i, j));
  }
  ModeOperator op(dim, dim);
  op.setFromTriplets(triplets.begin(), triplets.end());
  return op;
}

}  // namespace micromacro
