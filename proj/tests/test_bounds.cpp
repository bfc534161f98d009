#include <gtest/gtest.h>

#include <cmath>

#include "hybridvar/bounds.hpp"

using namespace hybridvar;

// Inputs l1(B0) = 5, ln(B0) = 0.1, l1(P_f) = 2, l1(K) = 1, beta = 0.5; expected
// values evaluated by hand from the bound formulas.

TEST(Bounds, Lemma1Hand) {
  const auto r = bounds_lemma1(5, 0.1, 2, 0.5);
  EXPECT_DOUBLE_EQ(r.lambda_max.lower, 2.5);
  EXPECT_DOUBLE_EQ(r.lambda_max.upper, 3.5);
  EXPECT_DOUBLE_EQ(r.lambda_min.lower, 0.05);
  EXPECT_DOUBLE_EQ(r.lambda_min.upper, 1.05);
}

TEST(Bounds, KappaBHand) {
  const auto r = bounds_kappa_b(5, 0.1, 2, 0.5);
  EXPECT_NEAR(r.lower, 2.380952380952381, 1e-14);
  EXPECT_NEAR(r.upper, 70.0, 1e-12);
  EXPECT_DOUBLE_EQ(r.terms.at("Gamma_kappa_B"), r.upper);
}

TEST(Bounds, KappaBCollapsesAtZeroWeight) {
  const auto r = bounds_kappa_b(5, 0.1, 2, 0.0);
  EXPECT_DOUBLE_EQ(r.lower, 50.0);
  EXPECT_DOUBLE_EQ(r.upper, 50.0);
}

TEST(Bounds, Thm3Hand) {
  const auto r = bounds_thm3(40, 2, 0.05, 1);
  EXPECT_NEAR(r.lower, 13.333333333333334, 1e-13);
  EXPECT_NEAR(r.upper, 42.0, 1e-13);
  const auto exact = bounds_thm3(40, 2, 0.05, 0);
  EXPECT_DOUBLE_EQ(exact.lower, 40);
  EXPECT_DOUBLE_EQ(exact.upper, 40);
}

TEST(Bounds, Thm4Hand) {
  const auto r = bounds_thm4(5, 0.1, 50, 2, 1, 0.5);
  EXPECT_DOUBLE_EQ(r.lower, 1.0);
  EXPECT_NEAR(r.upper, 73.5, 1e-12);
  EXPECT_NEAR(r.terms.at("Gamma_lambda_n_B"), 1.05, 1e-15);
  const auto s = bounds_thm4(5, 0.1, 50, 2, 1, 0.0);
  EXPECT_NEAR(s.lower, 1.0 / (1.0 / 50 + 0.1), 1e-12);
  EXPECT_NEAR(s.upper, 55.0, 1e-12);
}

TEST(Bounds, Coro2IsThm4WithInverseVariance) {
  const auto a = bounds_coro2(5, 0.1, 50, 2, 0.25, 0.3);
  const auto b = bounds_thm4(5, 0.1, 50, 2, 4.0, 0.3);
  EXPECT_DOUBLE_EQ(a.lower, b.lower);
  EXPECT_DOUBLE_EQ(a.upper, b.upper);
  EXPECT_EQ(a.theorem, Theorem::Coro2);
}

TEST(Bounds, DivergeAtUnitWeight) {
  for (const auto& r : {bounds_kappa_b(5, 0.1, 2, 1.0), bounds_thm4(5, 0.1, 50, 2, 1, 1.0),
                        bounds_coro2(5, 0.1, 50, 2, 1, 1.0)}) {
    EXPECT_TRUE(std::isinf(r.lower));
    EXPECT_TRUE(std::isinf(r.upper));
    EXPECT_EQ(r.diverged_on, "1 - beta");
  }
  const auto t5 = bounds_thm5(5, 0.1, 2, 1, 1.0);
  EXPECT_DOUBLE_EQ(t5.upper, 3.0);
  EXPECT_DOUBLE_EQ(t5.lower, 1.0);
}

TEST(Bounds, Thm5Hand) {
  const auto r = bounds_thm5(5, 0.1, 2, 1, 0.5);
  EXPECT_NEAR(r.lower, 1.223606797749979, 1e-14);
  EXPECT_NEAR(r.upper, 5.08113883008419, 1e-13);
  EXPECT_NEAR(r.terms.at("switch_beta"), 5.0 / 7.0, 1e-15);
}

TEST(Bounds, Thm6Hand) {
  const auto r = bounds_thm6(5, 2, 1, 0.5);
  EXPECT_DOUBLE_EQ(r.lower, 1.0);
  EXPECT_DOUBLE_EQ(r.upper, 4.5);
}

TEST(Bounds, SwitchPoint) {
  EXPECT_NEAR(switch_point(5, 2), 0.7142857142857143, 1e-15);
  EXPECT_DOUBLE_EQ(switch_point(1, 0), 1.0);
  try {
    switch_point(0, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateInputs);
  }
}

TEST(Bounds, Thm5UpperKinksAtSwitchPoint) {
  // Left and right slopes of the upper bound differ at the switch point.
  const double b = switch_point(5, 2), h = 1e-4;
  auto up = [](double beta) { return bounds_thm5(5, 0.1, 2, 1, beta).upper; };
  const double left = (up(b) - up(b - h)) / h;
  const double right = (up(b + h) - up(b)) / h;
  EXPECT_GT(std::abs(left - right), 1.0);
}

TEST(Bounds, RejectsBadInputs) {
  EXPECT_THROW(bounds_thm4(5, 0.1, 50, 2, 1, 1.2), Error);
  EXPECT_THROW(bounds_kappa_b(5, 0.0, 2, 0.5), Error);
  EXPECT_THROW(bounds_thm3(1, 1, 0, 1), Error);
  EXPECT_THROW(bounds_coro2(5, 0.1, 50, 2, 0.0, 0.5), Error);
}

TEST(BoundReport, BracketsWithSlack) {
  BoundReport r;
  r.lower = 1.0;
  r.upper = 2.0;
  EXPECT_TRUE(r.brackets(1.0 - 1e-12, 1e-9));
  EXPECT_FALSE(r.brackets(0.99, 1e-9));
  EXPECT_FALSE(r.brackets(std::nan(""), 1e-9));
  EXPECT_DOUBLE_EQ(sandwich_slack(1e5), 1e-9);
  EXPECT_DOUBLE_EQ(sandwich_slack(1e11), 1e-6);
}

TEST(BoundReport, JsonWritesInfinityAsString) {
  const nlohmann::json j = bounds_thm4(5, 0.1, 50, 2, 1, 1.0);
  EXPECT_EQ(j.at("upper"), "inf");
  EXPECT_EQ(j.at("theorem"), "Thm4");
  EXPECT_EQ(j.at("diverged_on"), "1 - beta");
}
