#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>

#include "hybridvar/core.hpp"
#include "hybridvar/linalg.hpp"
#include "hybridvar/rng.hpp"

namespace hybridvar {

/// Uniform grid of n points on the boundary of a disk of radius r.
struct GridGeometry {
  Index n = 500;
  double radius = 1.0;

  GridGeometry() = default;
  GridGeometry(Index points, double r = 1.0) : n(points), radius(r) {
    require(n >= 2, ErrorCode::InvalidArgument, "grid needs at least two points");
    require(radius > 0, ErrorCode::InvalidArgument, "grid radius must be positive");
  }

  double spacing() const { return 2.0 * std::numbers::pi / static_cast<double>(n); }

  /// Shortest angular separation between points i and j.
  double angle(Index i, Index j) const {
    const Index d = i > j ? i - j : j - i;
    return spacing() * static_cast<double>(std::min(d, n - d));
  }
};

enum class CovarianceKind { Correlation, Static, Ensemble, Hybrid };

/// Parameters a covariance was built from; unset fields do not apply.
struct CovarianceParams {
  std::optional<double> length_scale;
  std::optional<double> variance;
  std::optional<double> beta;
  std::optional<Index> ensemble_size;
  std::optional<std::uint64_t> seed;
};

template <typename Scalar>
struct CovarianceMatrix {
  Matrix<Scalar> data;
  CovarianceKind kind = CovarianceKind::Static;
  CovarianceParams params;

  Index size() const { return data.rows(); }
};

/// Deviation factor X_f (n x m) with zero row means, scaled by 1/sqrt(m-1).
template <typename Scalar>
struct EnsembleFactor {
  Matrix<Scalar> data;
  Index m = 0;
  std::uint64_t seed = 0;
};

/// True when every entry pair agrees to tolerance::kSymmetry and the smallest
/// eigenvalue is not below -kPsdRelative * lambda_max.
template <typename Scalar>
bool is_symmetric_psd(const Matrix<Scalar>& a) {
  if (a.rows() != a.cols()) return false;
  if (max_asymmetry(a) > Scalar(tolerance::kSymmetry)) return false;
  const Vector<Scalar> w = symmetric_eigenvalues(a);
  return w(0) >= -Scalar(tolerance::kPsdRelative) * std::abs(w(w.size() - 1));
}

/// SOAR correlation D_L(i,j) = (1 + rho) exp(-rho), rho = 2 r sin(theta_ij / 2) / L.
///
/// Uses the decaying exponential; a growing exponent gives neither a unit
/// diagonal nor a positive semidefinite matrix.
template <typename Scalar = double>
CovarianceMatrix<Scalar> build_soar(const GridGeometry& geom, double length_scale) {
  require(length_scale > 0, ErrorCode::NonPositiveLengthScale,
          "correlation length scale must be positive");
  const Index n = geom.n;
  Matrix<Scalar> d(n, n);
  for (Index j = 0; j < n; ++j) {
    d(j, j) = Scalar(1);
    for (Index i = j + 1; i < n; ++i) {
      const double rho = 2.0 * geom.radius / length_scale * std::sin(geom.angle(i, j) / 2.0);
      d(i, j) = d(j, i) = Scalar((1.0 + rho) * std::exp(-rho));
    }
  }
  CovarianceMatrix<Scalar> out{std::move(d), CovarianceKind::Correlation, {}};
  out.params.length_scale = length_scale;
  out.params.variance = 1.0;
  return out;
}

/// B0 = sigma2 * D_L0.
template <typename Scalar = double>
CovarianceMatrix<Scalar> build_static_b(const GridGeometry& geom, double length_scale,
                                        double variance) {
  require(variance > 0, ErrorCode::NonPositiveVariance, "static variance must be positive");
  auto out = build_soar<Scalar>(geom, length_scale);
  out.data *= Scalar(variance);
  out.kind = CovarianceKind::Static;
  out.params.variance = variance;
  return out;
}

/// Symmetric square root through the eigendecomposition. Eigenvalues within
/// the PSD tolerance below zero are clamped before taking the root.
template <typename Scalar>
Matrix<Scalar> sym_sqrt(const Matrix<Scalar>& a) {
  require(a.rows() == a.cols(), ErrorCode::DimensionMismatch, "sym_sqrt needs a square matrix");
  require(max_asymmetry(a) <= Scalar(tolerance::kSymmetry) * std::max(Scalar(1), a.cwiseAbs().maxCoeff()),
          ErrorCode::NotSymmetric, "sym_sqrt needs a symmetric matrix");
  const auto solver = symmetric_eigensystem<Scalar>(a);
  const Vector<Scalar>& w = solver.eigenvalues();
  const Scalar top = std::abs(w(w.size() - 1));
  require(w(0) >= -Scalar(tolerance::kPsdRelative) * top, ErrorCode::NotPositiveSemidefinite,
          "matrix has a negative eigenvalue beyond the PSD tolerance");
  const Vector<Scalar> root = w.cwiseMax(Scalar(0)).cwiseSqrt();
  const Matrix<Scalar>& v = solver.eigenvectors();
  return symmetrized(v * root.asDiagonal() * v.transpose());
}

template <typename Scalar>
Matrix<Scalar> sym_sqrt(const CovarianceMatrix<Scalar>& a) {
  return sym_sqrt(a.data);
}

/// Draws m members x_k = B1^{1/2} w_k with w_k ~ N(0, I), removes the
/// ensemble mean and scales by 1/sqrt(m-1). Member k uses stream k of `seed`.
template <typename Scalar>
EnsembleFactor<Scalar> sample_ensemble_factor(const CovarianceMatrix<Scalar>& b1, Index m,
                                              std::uint64_t seed) {
  const Index n = b1.size();
  require(m >= 2, ErrorCode::EnsembleTooSmall, "ensemble needs at least two members");
  require(m < n, ErrorCode::EnsembleTooLarge, "ensemble size must be below the state dimension");
  const Matrix<Scalar> root = sym_sqrt(b1.data);

  Matrix<Scalar> noise(n, m);
  for (Index k = 0; k < m; ++k) {
    Rng rng(seed, static_cast<std::uint64_t>(k));
    for (Index i = 0; i < n; ++i) noise(i, k) = Scalar(rng.normal());
  }
  Matrix<Scalar> x = root * noise;
  const Vector<Scalar> mean = x.rowwise().mean();
  x.colwise() -= mean;
  x /= std::sqrt(Scalar(m - 1));
  return {std::move(x), m, seed};
}

/// P_f = X_f X_f^T (n x n, rank <= m - 1).
template <typename Scalar>
CovarianceMatrix<Scalar> ensemble_covariance(const EnsembleFactor<Scalar>& x) {
  CovarianceMatrix<Scalar> out{symmetrized(x.data * x.data.transpose()), CovarianceKind::Ensemble, {}};
  out.params.ensemble_size = x.m;
  out.params.seed = x.seed;
  return out;
}

/// B = (1 - beta) B0 + beta P_f.
template <typename Scalar>
CovarianceMatrix<Scalar> hybrid_b(const CovarianceMatrix<Scalar>& b0,
                                  const CovarianceMatrix<Scalar>& pf, double beta) {
  require(b0.data.rows() == pf.data.rows() && b0.data.cols() == pf.data.cols(),
          ErrorCode::DimensionMismatch, "B0 and P_f dimensions differ");
  require(beta >= 0.0 && beta <= 1.0, ErrorCode::WeightOutOfRange, "beta must lie in [0, 1]");
  CovarianceMatrix<Scalar> out{Scalar(1.0 - beta) * b0.data + Scalar(beta) * pf.data,
                               CovarianceKind::Hybrid, {}};
  out.params.beta = beta;
  out.params.ensemble_size = pf.params.ensemble_size;
  out.params.seed = pf.params.seed;
  return out;
}

}  // namespace hybridvar
