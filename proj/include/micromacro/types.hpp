#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace micromacro {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using CMatrix = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using CVector = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using CMatrix2 = Eigen::Matrix<Complex<Scalar>, 2, 2>;

template <typename Scalar>
using CMatrix4 = Eigen::Matrix<Complex<Scalar>, 4, 4>;

// The library's numerics run in double precision; the aliases above stay
// generic so the small algebra helpers can be instantiated for long double
// in tests.
using cplx = Complex<double>;
using cmatrix = CMatrix<double>;
using cvector = CVector<double>;
using cmatrix2 = CMatrix2<double>;
using cmatrix4 = CMatrix4<double>;

using SparseVec = Eigen::SparseVector<cplx>;
using ModeOperator = Eigen::SparseMatrix<cplx>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

}  // namespace micromacro
