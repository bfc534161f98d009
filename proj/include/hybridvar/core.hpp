#pragma once

#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace hybridvar {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;
using Index = Eigen::Index;

enum class ErrorCode {
  NonPositiveLengthScale,
  NonPositiveVariance,
  NotPositiveSemidefinite,
  NotSymmetric,
  EnsembleTooSmall,
  EnsembleTooLarge,
  WeightOutOfRange,
  TooManyObservations,
  IncompatibleObservationCount,
  DimensionMismatch,
  NearSingularBackground,
  DegenerateInputs,
  IndefiniteDetected,
  InvalidArgument,
  ConfigParseError,
  UnknownFigure,
  IoError,
};

const char* to_string(ErrorCode code);

/// Exception type thrown by every library entry point. The code is stable and
/// is what the CLI reports in its machine-readable error line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

namespace tolerance {
/// Absolute entrywise symmetry tolerance for covariance matrices.
inline constexpr double kSymmetry = 1e-12;
/// Eigenvalues in [-kPsdRelative * lambda_max, 0] count as zero.
inline constexpr double kPsdRelative = 1e-10;
/// lambda_min / lambda_max below this marks B as numerically singular.
inline constexpr double kNearSingularRatio = 1e-14;
/// Relative slack used when checking lower <= kappa <= upper.
inline constexpr double kSandwich = 1e-9;
inline constexpr double kSandwichIllConditioned = 1e-6;
inline constexpr double kIllConditionedKappa = 1e10;
}  // namespace tolerance

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) throw Error(code, message);
}

/// Largest absolute asymmetry |a_ij - a_ji|.
template <typename Derived>
typename Derived::Scalar max_asymmetry(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<typename Derived::Scalar>::infinity();
  return (a - a.transpose()).cwiseAbs().maxCoeff();
}

template <typename Derived>
Matrix<typename Derived::Scalar> symmetrized(const Eigen::MatrixBase<Derived>& a) {
  return (a + a.transpose()) / typename Derived::Scalar(2);
}

}  // namespace hybridvar
