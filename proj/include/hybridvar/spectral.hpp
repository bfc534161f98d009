#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "hybridvar/core.hpp"
#include "hybridvar/covariance.hpp"
#include "hybridvar/linalg.hpp"

namespace hybridvar {

enum class SpectralMethod { FullEigensolve };

/// Extreme eigenvalues and condition number of a symmetric matrix.
struct SpectralSummary {
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  double kappa = 1.0;
  SpectralMethod method = SpectralMethod::FullEigensolve;
};

/// lambda_1 / lambda_n by full symmetric eigensolve. A smallest eigenvalue at
/// or below 64 eps * lambda_1 is a numerical zero and gives kappa = +inf.
template <typename Scalar>
SpectralSummary spectral_summary(const Matrix<Scalar>& a) {
  require(a.rows() == a.cols() && a.rows() > 0, ErrorCode::DimensionMismatch,
          "spectral_summary needs a non-empty square matrix");
  const Scalar scale = std::max(Scalar(1), a.cwiseAbs().maxCoeff());
  require(max_asymmetry(a) <= Scalar(tolerance::kSymmetry) * scale, ErrorCode::NotSymmetric,
          "spectral_summary needs a symmetric matrix");
  const Vector<Scalar> w = symmetric_eigenvalues(a);
  SpectralSummary s;
  s.lambda_max = static_cast<double>(w(w.size() - 1));
  s.lambda_min = static_cast<double>(w(0));
  const double zero = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(s.lambda_max);
  s.kappa = s.lambda_min > zero ? s.lambda_max / s.lambda_min : kInfinity;
  return s;
}

namespace detail {
inline bool within(double lower, double value, double upper, double slack) {
  return value >= lower - slack && value <= upper + slack;
}
}  // namespace detail

/// Weyl's inequalities for A = A1 + A2 (symmetric): for every k,
/// lambda_k(A1) + lambda_n(A2) <= lambda_k(A) <= lambda_k(A1) + lambda_1(A2).
template <typename Scalar>
bool check_weyl_inequality(const Matrix<Scalar>& a1, const Matrix<Scalar>& a2,
                           double relative_slack = 1e-10) {
  require(a1.rows() == a2.rows() && a1.cols() == a2.cols(), ErrorCode::DimensionMismatch,
          "Weyl check needs matching dimensions");
  const Vector<Scalar> w1 = symmetric_eigenvalues(a1);
  const Vector<Scalar> w2 = symmetric_eigenvalues(a2);
  const Vector<Scalar> w = symmetric_eigenvalues(Matrix<Scalar>(a1 + a2));
  const Index n = w.size();
  const double scale = static_cast<double>(w1.cwiseAbs().maxCoeff() + w2.cwiseAbs().maxCoeff());
  const double slack = relative_slack * std::max(scale, std::numeric_limits<double>::min());
  for (Index k = 0; k < n; ++k) {
    const double lo = static_cast<double>(w1(k) + w2(0));
    const double hi = static_cast<double>(w1(k) + w2(n - 1));
    if (!detail::within(lo, static_cast<double>(w(k)), hi, slack)) return false;
  }
  return true;
}

/// Product inequality for PSD A1, A2:
/// max[l1(A1) ln(A2), ln(A1) l1(A2)] <= l1(A1 A2) <= l1(A1) l1(A2).
/// l1(A1 A2) is taken from the similar symmetric matrix A2^{1/2} A1 A2^{1/2}.
template <typename Scalar>
bool check_product_inequality(const Matrix<Scalar>& a1, const Matrix<Scalar>& a2,
                              double relative_slack = 1e-10) {
  require(a1.rows() == a2.rows() && a1.cols() == a2.cols(), ErrorCode::DimensionMismatch,
          "product check needs matching dimensions");
  require(is_symmetric_psd(a1) && is_symmetric_psd(a2), ErrorCode::NotPositiveSemidefinite,
          "product check needs symmetric PSD matrices");
  const Vector<Scalar> w1 = symmetric_eigenvalues(a1);
  const Vector<Scalar> w2 = symmetric_eigenvalues(a2);
  const Index n = w1.size();
  const Matrix<Scalar> root = sym_sqrt(a2);
  const double top = static_cast<double>(lambda_max<Scalar>(symmetrized(root * a1 * root)));
  const double l1a = static_cast<double>(w1(n - 1)), lna = static_cast<double>(std::max(w1(0), Scalar(0)));
  const double l1b = static_cast<double>(w2(n - 1)), lnb = static_cast<double>(std::max(w2(0), Scalar(0)));
  const double upper = l1a * l1b;
  const double lower = std::max(l1a * lnb, lna * l1b);
  const double slack = relative_slack * std::max(upper, std::numeric_limits<double>::min());
  return detail::within(lower, top, upper, slack);
}

}  // namespace hybridvar
