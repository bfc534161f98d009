#pragma once

#include <string>

#include <Eigen/Eigenvalues>

#include "hybridvar/core.hpp"

namespace hybridvar {

/// Eigenvalues of a symmetric matrix in ascending order. Only the lower
/// triangle is read.
template <typename Derived>
Vector<typename Derived::Scalar> symmetric_eigenvalues(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(a.derived(), Eigen::EigenvaluesOnly);
  require(solver.info() == Eigen::Success, ErrorCode::InvalidArgument,
          "symmetric eigensolver did not converge");
  return solver.eigenvalues();
}

template <typename Scalar>
Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> symmetric_eigensystem(const Matrix<Scalar>& a) {
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(a, Eigen::ComputeEigenvectors);
  require(solver.info() == Eigen::Success, ErrorCode::InvalidArgument,
          "symmetric eigensolver did not converge");
  return solver;
}

template <typename Scalar>
Scalar lambda_max(const Matrix<Scalar>& a) {
  return symmetric_eigenvalues(a)(a.rows() - 1);
}

/// Inverse of a symmetric positive definite matrix through its
/// eigendecomposition. Throws NearSingularBackground when
/// lambda_min / lambda_max < ratio_floor.
template <typename Scalar>
Matrix<Scalar> spd_inverse(const Matrix<Scalar>& a,
                           Scalar ratio_floor = Scalar(tolerance::kNearSingularRatio)) {
  const auto solver = symmetric_eigensystem(a);
  const Vector<Scalar>& w = solver.eigenvalues();
  const Scalar top = w(w.size() - 1);
  const Scalar bottom = w(0);
  if (!(top > 0) || !(bottom / top >= ratio_floor)) {
    throw Error(ErrorCode::NearSingularBackground,
                "matrix is numerically singular: lambda_min/lambda_max = " +
                    std::to_string(static_cast<double>(bottom / top)));
  }
  const Matrix<Scalar>& v = solver.eigenvectors();
  return symmetrized(v * w.cwiseInverse().asDiagonal() * v.transpose());
}

/// Moore-Penrose pseudo-inverse of a symmetric PSD matrix; eigenvalues at or
/// below kPsdRelative * lambda_max are treated as zero.
template <typename Scalar>
Matrix<Scalar> psd_pseudo_inverse(const Matrix<Scalar>& a) {
  const auto solver = symmetric_eigensystem(a);
  const Vector<Scalar>& w = solver.eigenvalues();
  const Scalar cutoff = Scalar(tolerance::kPsdRelative) * std::abs(w(w.size() - 1));
  Vector<Scalar> inv(w.size());
  for (Index i = 0; i < w.size(); ++i) inv(i) = w(i) > cutoff ? Scalar(1) / w(i) : Scalar(0);
  const Matrix<Scalar>& v = solver.eigenvectors();
  return symmetrized(v * inv.asDiagonal() * v.transpose());
}

}  // namespace hybridvar
