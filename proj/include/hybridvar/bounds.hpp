#pragma once

#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "hybridvar/core.hpp"

namespace hybridvar {

enum class Theorem { Lemma1Max, Lemma1Min, Lemma2, Thm3, Thm4, Coro2, Thm5, Thm6 };

const char* to_string(Theorem theorem);

/// Lower and upper bound on one spectral quantity, with every input and
/// intermediate term recorded under a fixed name.
///
/// Term names: lambda1_B0, lambdan_B0, kappa_B0, lambda1_Pf, lambda1_K,
/// lambda1_K2, beta, kappa_B, lambda1_B, lambdan_B, sigma2_R,
/// gamma_kappa_B, Gamma_kappa_B, Gamma_lambda_n_B, switch_beta.
///
/// A divergent bound is +inf and `diverged_on` names the vanishing
/// denominator; no floating-point exception is raised.
struct BoundReport {
  Theorem theorem = Theorem::Thm4;
  double lower = 0.0;
  double upper = kInfinity;
  std::map<std::string, double> terms;
  std::string diverged_on;

  /// lower <= value <= upper with relative slack on each side.
  bool brackets(double value, double relative_slack) const;
};

/// Relative sandwich slack for a quantity of size `kappa`: 1e-9, widened to
/// 1e-6 once kappa exceeds 1e10.
double sandwich_slack(double kappa);

void to_json(nlohmann::json& j, const BoundReport& report);

/// Extreme eigenvalues of B = (1-beta) B0 + beta P_f for rank-deficient P_f.
struct Lemma1Bounds {
  BoundReport lambda_max;
  BoundReport lambda_min;
};
Lemma1Bounds bounds_lemma1(double l1_b0, double ln_b0, double l1_pf, double beta);

/// kappa(B). Lower is max[x, 1/x] with x = 1/kappa(B0) + beta l1(Pf) / ((1-beta) l1(B0));
/// upper is kappa(B0) (1 + beta l1(Pf) / ((1-beta) l1(B0))). Both +inf at beta = 1.
BoundReport bounds_kappa_b(double l1_b0, double ln_b0, double l1_pf, double beta);

/// kappa(B^{-1} + K) from the exact spectrum of B.
BoundReport bounds_thm3(double kappa_b, double l1_b, double ln_b, double l1_k);

/// kappa(S) for the hybrid background using only l1(B0), ln(B0), l1(P_f), l1(K).
BoundReport bounds_thm4(double l1_b0, double ln_b0, double kappa_b0, double l1_pf, double l1_k,
                        double beta);

/// Thm4 with l1(K) = 1 / sigma2_R (selection H, R = sigma2_R I).
BoundReport bounds_coro2(double l1_b0, double ln_b0, double kappa_b0, double l1_pf, double sigma2_r,
                         double beta);

/// kappa(I + U_h^T K U_h) via the A1 + A2 split; l1(K^2) = l1(K)^2.
BoundReport bounds_thm5(double l1_b0, double ln_b0, double l1_pf, double l1_k, double beta);

/// kappa(I + U_h^T K U_h) via l1(B K) <= l1(B) l1(K).
BoundReport bounds_thm6(double l1_b0, double l1_pf, double l1_k, double beta);

/// Weight at which (1 - beta) l1(B0) = beta l1(P_f), i.e. where the max term
/// of the Thm5 upper bound changes branch.
double switch_point(double l1_b0, double l1_pf);

}  // namespace hybridvar
