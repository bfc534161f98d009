#pragma once

#include <cstdint>
#include <vector>

#include "hybridvar/core.hpp"
#include "hybridvar/covariance.hpp"
#include "hybridvar/hessian.hpp"
#include "hybridvar/linalg.hpp"
#include "hybridvar/rng.hpp"

namespace hybridvar {

inline constexpr double kDefaultCgTolerance = 1e-6;

template <typename Scalar>
struct CgResult {
  Vector<Scalar> solution;
  Index iterations = 0;
  /// ||b - S x_k|| / ||b|| for k = 0..iterations (entry 0 is the zero start).
  std::vector<double> residual_history;
  bool converged = false;
  double tolerance = kDefaultCgTolerance;
};

/// Unpreconditioned conjugate gradients from x_0 = 0, stopping at the first
/// iterate whose true relative residual is at most `tol`. max_iter <= 0
/// selects 5 * dim. Throws IndefiniteDetected if p^T S p <= 0.
template <typename Scalar>
CgResult<Scalar> cg_solve(const Matrix<Scalar>& s, const Vector<Scalar>& b,
                          double tol = kDefaultCgTolerance, Index max_iter = 0) {
  require(s.rows() == s.cols() && s.rows() == b.size(), ErrorCode::DimensionMismatch,
          "CG needs a square system matching the right-hand side");
  require(tol > 0.0, ErrorCode::InvalidArgument, "CG tolerance must be positive");
  const Scalar b_norm = b.norm();
  require(b_norm > Scalar(0), ErrorCode::InvalidArgument, "CG right-hand side must be non-zero");
  if (max_iter <= 0) max_iter = 5 * s.rows();

  CgResult<Scalar> out;
  out.tolerance = tol;
  out.solution = Vector<Scalar>::Zero(b.size());
  out.residual_history.push_back(1.0);

  Vector<Scalar> r = b;
  Vector<Scalar> direction = r;
  Scalar rr = r.squaredNorm();
  Vector<Scalar> s_dir(b.size());
  while (out.iterations < max_iter) {
    s_dir.noalias() = s * direction;
    const Scalar curvature = direction.dot(s_dir);
    require(curvature > Scalar(0), ErrorCode::IndefiniteDetected,
            "CG met a direction with non-positive curvature");
    const Scalar alpha = rr / curvature;
    out.solution += alpha * direction;
    r -= alpha * s_dir;
    ++out.iterations;

    const double residual = static_cast<double>((b - s * out.solution).norm() / b_norm);
    out.residual_history.push_back(residual);
    if (residual <= tol) {
      out.converged = true;
      break;
    }
    const Scalar rr_next = r.squaredNorm();
    direction = r + (rr_next / rr) * direction;
    rr = rr_next;
  }
  return out;
}

template <typename Scalar>
CgResult<Scalar> cg_solve(const HessianMatrix<Scalar>& s, const Vector<Scalar>& b,
                          double tol = kDefaultCgTolerance, Index max_iter = 0) {
  return cg_solve(s.data, b, tol, max_iter);
}

/// Random vectors for the linear system, drawn once per trial and reused
/// across the beta sweep: x_diff = x_b - x_0 (length n) on stream 0 and the
/// innovation d (length p) on stream 1, both i.i.d. standard normal.
template <typename Scalar>
struct RhsSpec {
  Vector<Scalar> x_diff;
  Vector<Scalar> innovation;
  std::uint64_t seed = 0;
};

template <typename Scalar = double>
RhsSpec<Scalar> make_rhs_spec(Index n, Index p, std::uint64_t seed) {
  RhsSpec<Scalar> spec;
  spec.seed = seed;
  spec.x_diff.resize(n);
  spec.innovation.resize(p);
  Rng state_stream(seed, 0);
  for (Index i = 0; i < n; ++i) spec.x_diff(i) = Scalar(state_stream.normal());
  Rng obs_stream(seed, 1);
  for (Index i = 0; i < p; ++i) spec.innovation(i) = Scalar(obs_stream.normal());
  return spec;
}

/// b = B^{-1} (x_b - x_0) - H_0^T d.
template <typename Scalar>
Vector<Scalar> build_rhs(const CovarianceMatrix<Scalar>& b, const Matrix<Scalar>& h0,
                         const RhsSpec<Scalar>& spec) {
  require(b.size() == spec.x_diff.size() && h0.cols() == b.size() &&
              h0.rows() == spec.innovation.size(),
          ErrorCode::DimensionMismatch, "right-hand side dimensions do not match B and H_0");
  return spd_inverse(b.data) * spec.x_diff - h0.transpose() * spec.innovation;
}

/// Control-space right-hand side b_P = U_h^+ (x_b - x_0) - U_h^T H_0^T d.
///
/// U_h^+ = U_h^T B^+ since U_h U_h^T = B, so for beta < 1 this is exactly
/// U_h^T b with b from build_rhs. At beta = 1 B is singular and the
/// pseudo-inverse gives the minimum-norm control increment.
template <typename Scalar>
Vector<Scalar> build_rhs_preconditioned(const CvtFactor<Scalar>& uh, const CovarianceMatrix<Scalar>& b,
                                        const Matrix<Scalar>& h0, const RhsSpec<Scalar>& spec) {
  require(uh.n() == b.size(), ErrorCode::DimensionMismatch, "U_h and B dimensions differ");
  if (uh.beta < 1.0) return uh.data.transpose() * build_rhs(b, h0, spec);
  require(h0.cols() == b.size() && h0.rows() == spec.innovation.size(),
          ErrorCode::DimensionMismatch, "right-hand side dimensions do not match B and H_0");
  const Vector<Scalar> background = psd_pseudo_inverse(b.data) * spec.x_diff;
  return uh.data.transpose() * (background - h0.transpose() * spec.innovation);
}

}  // namespace hybridvar
