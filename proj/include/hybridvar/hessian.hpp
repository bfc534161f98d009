#pragma once

#include <cmath>
#include <utility>

#include "hybridvar/core.hpp"
#include "hybridvar/covariance.hpp"
#include "hybridvar/linalg.hpp"

namespace hybridvar {

/// Where a Hessian came from; recorded in the serialization sidecar.
struct HessianProvenance {
  CovarianceParams background;
  Index state_dim = 0;
  Index ensemble_size = 0;
};

template <typename Scalar>
struct HessianMatrix {
  Matrix<Scalar> data;
  bool preconditioned = false;
  double beta = 0.0;
  HessianProvenance provenance;

  Index size() const { return data.rows(); }
};

/// U_h = [sqrt(1 - beta) U, sqrt(beta) X_f], so that U_h U_h^T = B.
template <typename Scalar>
struct CvtFactor {
  Matrix<Scalar> data;  // n x (n + m)
  double beta = 0.0;
  Matrix<Scalar> u;     // n x n, symmetric square root of B0
  Matrix<Scalar> x;     // n x m ensemble factor

  Index n() const { return data.rows(); }
  Index m() const { return x.cols(); }
};

/// S = B^{-1} + K with B^{-1} from the eigendecomposition of B.
/// Throws NearSingularBackground when lambda_n(B) / lambda_1(B) < 1e-14.
template <typename Scalar>
HessianMatrix<Scalar> assemble_unpreconditioned(const CovarianceMatrix<Scalar>& b,
                                                const Matrix<Scalar>& k) {
  require(b.data.rows() == k.rows() && b.data.cols() == k.cols(), ErrorCode::DimensionMismatch,
          "B and K dimensions differ");
  HessianMatrix<Scalar> s;
  s.data = symmetrized(spd_inverse(b.data) + k);
  s.preconditioned = false;
  s.beta = b.params.beta.value_or(0.0);
  s.provenance.background = b.params;
  s.provenance.state_dim = b.size();
  s.provenance.ensemble_size = b.params.ensemble_size.value_or(0);
  return s;
}

template <typename Scalar>
CvtFactor<Scalar> assemble_cvt_factor(const Matrix<Scalar>& u, const Matrix<Scalar>& x,
                                      double beta) {
  require(u.rows() == u.cols(), ErrorCode::DimensionMismatch, "U must be square");
  require(x.rows() == u.rows(), ErrorCode::DimensionMismatch, "X_f must have n rows");
  require(beta >= 0.0 && beta <= 1.0, ErrorCode::WeightOutOfRange, "beta must lie in [0, 1]");
  const Index n = u.rows();
  CvtFactor<Scalar> f;
  f.data.resize(n, n + x.cols());
  f.data << Scalar(std::sqrt(1.0 - beta)) * u, Scalar(std::sqrt(beta)) * x;
  f.beta = beta;
  f.u = u;
  f.x = x;
  return f;
}

/// S_P = I_{n+m} + U_h^T K U_h; defined for every beta in [0, 1].
template <typename Scalar>
HessianMatrix<Scalar> assemble_preconditioned(const CvtFactor<Scalar>& uh, const Matrix<Scalar>& k) {
  require(k.rows() == uh.n() && k.cols() == uh.n(), ErrorCode::DimensionMismatch,
          "K must be n x n");
  const Index dim = uh.data.cols();
  HessianMatrix<Scalar> s;
  s.data = symmetrized(Matrix<Scalar>::Identity(dim, dim) + uh.data.transpose() * k * uh.data);
  s.preconditioned = true;
  s.beta = uh.beta;
  s.provenance.background.beta = uh.beta;
  s.provenance.state_dim = uh.n();
  s.provenance.ensemble_size = uh.m();
  return s;
}

/// U_h^T K U_h = A1 + A2 with A1 block diagonal
/// ((1-beta) U^T K U, beta X^T K X) and A2 the off-diagonal coupling
/// sqrt(beta - beta^2) U^T K X and its transpose.
template <typename Scalar>
std::pair<Matrix<Scalar>, Matrix<Scalar>> split_a1_a2(const CvtFactor<Scalar>& uh,
                                                      const Matrix<Scalar>& k) {
  require(k.rows() == uh.n() && k.cols() == uh.n(), ErrorCode::DimensionMismatch,
          "K must be n x n");
  const Index n = uh.n();
  const Index m = uh.m();
  const double beta = uh.beta;
  const Matrix<Scalar> ku = k * uh.u;
  const Matrix<Scalar> kx = k * uh.x;

  Matrix<Scalar> a1 = Matrix<Scalar>::Zero(n + m, n + m);
  a1.topLeftCorner(n, n) = symmetrized(Scalar(1.0 - beta) * (uh.u.transpose() * ku));
  a1.bottomRightCorner(m, m) = symmetrized(Scalar(beta) * (uh.x.transpose() * kx));

  Matrix<Scalar> a2 = Matrix<Scalar>::Zero(n + m, n + m);
  const Scalar coupling = Scalar(std::sqrt(std::max(0.0, beta - beta * beta)));
  a2.topRightCorner(n, m) = coupling * (uh.u.transpose() * kx);
  a2.bottomLeftCorner(m, n) = a2.topRightCorner(n, m).transpose();
  return {std::move(a1), std::move(a2)};
}

}  // namespace hybridvar
