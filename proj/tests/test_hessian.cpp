#include <gtest/gtest.h>

#include <sstream>

#include "hybridvar/covariance.hpp"
#include "hybridvar/hessian.hpp"
#include "hybridvar/matrix_io.hpp"
#include "hybridvar/observation.hpp"
#include "hybridvar/spectral.hpp"

using namespace hybridvar;

namespace {

struct Problem {
  CovarianceMatrix<double> b0, pf;
  EnsembleFactor<double> x;
  MatrixXd u, k;

  explicit Problem(Index n = 40, Index m = 8, Index p = 12) {
    const GridGeometry g(n);
    b0 = build_static_b(g, 0.2, 1.0);
    x = sample_ensemble_factor(build_static_b(g, 0.1, 1.0), m, 3);
    pf = ensemble_covariance(x);
    u = sym_sqrt(b0);
    k = build_k(observation_setup_3d(build_h(ObservationVariant::RandomPlacement, n, p, 4), 1.0));
  }
};

}  // namespace

TEST(CvtFactor, ReproducesHybridCovariance) {
  Problem s;
  for (double beta : {0.0, 0.3, 0.7, 1.0}) {
    const auto uh = assemble_cvt_factor(s.u, s.x.data, beta);
    EXPECT_EQ(uh.data.cols(), 48);
    const MatrixXd b = hybrid_b(s.b0, s.pf, beta).data;
    EXPECT_LT((uh.data * uh.data.transpose() - b).norm() / b.norm(), 1e-10);
  }
}

TEST(Hessian, UnpreconditionedMatchesExplicitInverse) {
  Problem s;
  const auto b = hybrid_b(s.b0, s.pf, 0.5);
  const auto h = assemble_unpreconditioned(b, s.k);
  const MatrixXd expect = b.data.inverse() + s.k;
  EXPECT_LT((h.data - expect).norm() / expect.norm(), 1e-9);
  EXPECT_FALSE(h.preconditioned);
  EXPECT_DOUBLE_EQ(h.beta, 0.5);
}

TEST(Hessian, UnpreconditionedSingularAtUnitWeight) {
  Problem s;
  try {
    assemble_unpreconditioned(hybrid_b(s.b0, s.pf, 1.0), s.k);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NearSingularBackground);
  }
}

TEST(Hessian, PreconditionedIsIdentityPlusPsd) {
  Problem s;
  for (double beta : {0.0, 0.5, 1.0}) {
    const auto uh = assemble_cvt_factor(s.u, s.x.data, beta);
    const auto h = assemble_preconditioned(uh, s.k);
    const auto sum = spectral_summary(h.data);
    EXPECT_GE(sum.lambda_min, 1.0 - 1e-12);
    // K has rank p < n + m, so the smallest eigenvalue is exactly one.
    EXPECT_NEAR(sum.lambda_min, 1.0, 1e-12);
    EXPECT_TRUE(std::isfinite(sum.kappa));
  }
}

TEST(Hessian, SplitSumsToProjectedK) {
  Problem s;
  const auto uh = assemble_cvt_factor(s.u, s.x.data, 0.35);
  const auto [a1, a2] = split_a1_a2(uh, s.k);
  const MatrixXd full = uh.data.transpose() * s.k * uh.data;
  EXPECT_LT((a1 + a2 - full).norm() / full.norm(), 1e-12);
  EXPECT_TRUE(check_weyl_inequality(a1, a2));
  EXPECT_TRUE(a2.topLeftCorner(40, 40).isZero(0.0));
  EXPECT_TRUE(a2.bottomRightCorner(8, 8).isZero(0.0));
}

TEST(Hessian, ConditionNumberExceedsStaticOnlyForUnpreconditioned) {
  Problem s(60, 10, 20);
  const double k0 = spectral_summary(assemble_unpreconditioned(s.b0, s.k).data).kappa;
  const double k9 = spectral_summary(assemble_unpreconditioned(hybrid_b(s.b0, s.pf, 0.9), s.k).data).kappa;
  EXPECT_GT(k9, k0);
}

TEST(MatrixIo, BinaryRoundTripAndLayout) {
  MatrixXd m(2, 3);
  m << 1, 2, 3, 4, 5, -std::numeric_limits<double>::infinity();
  std::stringstream buf;
  write_matrix_binary(buf, m);
  const std::string bytes = buf.str();
  ASSERT_EQ(bytes.size(), 24u + 6 * 8);
  EXPECT_EQ(bytes.substr(0, 8), "HYBVMAT1");
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 2);
  EXPECT_EQ(static_cast<unsigned char>(bytes[16]), 3);
  double second;
  std::memcpy(&second, bytes.data() + 32, 8);
  EXPECT_EQ(second, 2.0);  // row-major
  buf.seekg(0);
  EXPECT_EQ(read_matrix_binary(buf), m);
}

TEST(MatrixIo, RejectsBadMagic) {
  std::stringstream buf("NOTAMATRIX0000000000000000");
  try {
    read_matrix_binary(buf);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
}

TEST(MatrixIo, CsvAndFormatting) {
  MatrixXd m(1, 2);
  m << 0.1, std::numeric_limits<double>::infinity();
  std::stringstream out;
  write_matrix_csv(out, m);
  EXPECT_EQ(out.str(), "0.10000000000000001,inf\n");
  EXPECT_EQ(format_double(2.0), "2");
}
