#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "hybridvar/core.hpp"
#include "hybridvar/rng.hpp"

namespace hybridvar {

/// The four linear observation operators used in the experiments.
///
/// Row i (0-based) of each variant, with stride s = n / p:
///   RowsFirstP        column i
///   EveryNthPoint     column s*(i+1) - 1
///   FivePointAverage  1/5 on columns s*(i+1) - 3 ... s*(i+1) + 1, wrapped mod n
///   RandomPlacement   one of p distinct columns drawn by partial Fisher-Yates
/// Columns are 0-based (1-based grid index minus one), with the
/// wrap mapping index 0 onto the last grid point.
enum class ObservationVariant : int {
  RowsFirstP = 1,
  EveryNthPoint = 2,
  FivePointAverage = 3,
  RandomPlacement = 4,
};

const char* to_string(ObservationVariant variant);
ObservationVariant observation_variant_from_int(int value);

/// True for variants whose rows hold a single unit entry.
inline bool is_selection(ObservationVariant variant) {
  return variant != ObservationVariant::FivePointAverage;
}

template <typename Scalar>
struct ObservationOperator {
  ObservationVariant variant = ObservationVariant::RowsFirstP;
  Matrix<Scalar> matrix;  // p x n
  std::optional<std::uint64_t> seed;

  Index p() const { return matrix.rows(); }
  Index n() const { return matrix.cols(); }
};

template <typename Scalar = double>
ObservationOperator<Scalar> build_h(ObservationVariant variant, Index n, Index p,
                                    std::uint64_t seed = 0) {
  require(p >= 1, ErrorCode::InvalidArgument, "need at least one observation");
  require(p <= n, ErrorCode::TooManyObservations, "more observations than grid points");
  const bool strided = variant == ObservationVariant::EveryNthPoint ||
                       variant == ObservationVariant::FivePointAverage;
  if (strided) {
    require(n % p == 0, ErrorCode::IncompatibleObservationCount,
            "variants 2 and 3 need p to divide n");
  }
  if (variant == ObservationVariant::FivePointAverage) {
    require(n >= 5, ErrorCode::IncompatibleObservationCount,
            "five-point averaging needs at least five grid points");
  }

  ObservationOperator<Scalar> h;
  h.variant = variant;
  h.matrix = Matrix<Scalar>::Zero(p, n);
  const Index stride = n / p;
  switch (variant) {
    case ObservationVariant::RowsFirstP:
      for (Index i = 0; i < p; ++i) h.matrix(i, i) = Scalar(1);
      break;
    case ObservationVariant::EveryNthPoint:
      for (Index i = 0; i < p; ++i) h.matrix(i, stride * (i + 1) - 1) = Scalar(1);
      break;
    case ObservationVariant::FivePointAverage:
      for (Index i = 0; i < p; ++i) {
        const Index centre = stride * (i + 1);  // 1-based
        for (Index j = centre - 2; j <= centre + 2; ++j) {
          const Index col = ((j - 1) % n + n) % n;
          h.matrix(i, col) = Scalar(1) / Scalar(5);
        }
      }
      break;
    case ObservationVariant::RandomPlacement: {
      std::vector<Index> columns(static_cast<std::size_t>(n));
      std::iota(columns.begin(), columns.end(), Index{0});
      Rng rng(seed);
      for (Index i = 0; i < p; ++i) {
        const auto pick = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - i)));
        std::swap(columns[static_cast<std::size_t>(i)], columns[static_cast<std::size_t>(pick)]);
        h.matrix(i, columns[static_cast<std::size_t>(i)]) = Scalar(1);
      }
      h.seed = seed;
      break;
    }
  }
  return h;
}

/// R = sigma2 * I_p.
template <typename Scalar = double>
Matrix<Scalar> build_r(Index p, double sigma2) {
  require(sigma2 > 0, ErrorCode::NonPositiveVariance, "observation variance must be positive");
  require(p >= 1, ErrorCode::InvalidArgument, "need at least one observation");
  return Scalar(sigma2) * Matrix<Scalar>::Identity(p, p);
}

/// One observation time: operator H_i, error covariance R_i and the linear
/// propagator M_{i,0} (identity when empty).
template <typename Scalar>
struct ObservationTerm {
  Matrix<Scalar> h;
  Matrix<Scalar> r;
  Matrix<Scalar> propagator;
};

/// Observations at times 0..N; a single term is the 3D case.
template <typename Scalar>
struct ObservationSetup {
  std::vector<ObservationTerm<Scalar>> terms;
  std::optional<double> sigma2_r;

  Index time_levels() const { return static_cast<Index>(terms.size()); }
};

template <typename Scalar>
ObservationSetup<Scalar> observation_setup_3d(const ObservationOperator<Scalar>& h, double sigma2_r) {
  ObservationSetup<Scalar> setup;
  setup.terms.push_back({h.matrix, build_r<Scalar>(h.p(), sigma2_r), Matrix<Scalar>()});
  setup.sigma2_r = sigma2_r;
  return setup;
}

/// K = sum_i (H_i M_i0)^T R_i^{-1} (H_i M_i0).
template <typename Scalar>
Matrix<Scalar> build_k(const ObservationSetup<Scalar>& setup) {
  require(!setup.terms.empty(), ErrorCode::DimensionMismatch, "observation setup has no terms");
  const Index n = setup.terms.front().h.cols();
  Matrix<Scalar> k = Matrix<Scalar>::Zero(n, n);
  for (const auto& term : setup.terms) {
    const Index p = term.h.rows();
    require(term.h.cols() == n, ErrorCode::DimensionMismatch, "H_i column count differs from n");
    require(term.r.rows() == p && term.r.cols() == p, ErrorCode::DimensionMismatch,
            "R_i must be p x p");
    Matrix<Scalar> hm = term.h;
    if (term.propagator.size() != 0) {
      require(term.propagator.rows() == n && term.propagator.cols() == n,
              ErrorCode::DimensionMismatch, "propagator must be n x n");
      hm = term.h * term.propagator;
    }
    Eigen::LLT<Matrix<Scalar>> llt(term.r);
    require(llt.info() == Eigen::Success && max_asymmetry(term.r) <= Scalar(tolerance::kSymmetry),
            ErrorCode::NotPositiveSemidefinite, "R_i must be symmetric positive definite");
    k.noalias() += hm.transpose() * llt.solve(hm);
  }
  return symmetrized(k);
}

}  // namespace hybridvar
