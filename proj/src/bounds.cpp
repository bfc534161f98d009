#include "hybridvar/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace hybridvar {

namespace {

void check_weight(double beta) {
  require(beta >= 0.0 && beta <= 1.0, ErrorCode::WeightOutOfRange, "beta must lie in [0, 1]");
}

void check_background(double l1_b0, double ln_b0, double l1_pf) {
  require(ln_b0 > 0.0 && l1_b0 >= ln_b0, ErrorCode::InvalidArgument,
          "need l1(B0) >= ln(B0) > 0");
  require(l1_pf >= 0.0, ErrorCode::InvalidArgument, "need l1(P_f) >= 0");
}

// beta l1(P_f) / ((1 - beta) l1(B0)), the ensemble-to-static ratio.
double ensemble_ratio(double l1_b0, double l1_pf, double beta) {
  return beta * l1_pf / ((1.0 - beta) * l1_b0);
}

BoundReport thm4_like(Theorem theorem, double l1_b0, double ln_b0, double kappa_b0, double l1_pf,
                      double l1_k, double beta) {
  check_background(l1_b0, ln_b0, l1_pf);
  check_weight(beta);
  require(kappa_b0 >= 1.0 - 1e-12, ErrorCode::InvalidArgument, "kappa(B0) must be >= 1");
  require(l1_k >= 0.0, ErrorCode::InvalidArgument, "need l1(K) >= 0");

  BoundReport r;
  r.theorem = theorem;
  r.terms = {{"lambda1_B0", l1_b0}, {"lambdan_B0", ln_b0}, {"kappa_B0", kappa_b0},
             {"lambda1_Pf", l1_pf}, {"lambda1_K", l1_k},   {"beta", beta}};
  const double gamma_lambda_n_b =
      std::min((1.0 - beta) * ln_b0 + beta * l1_pf, (1.0 - beta) * l1_b0);
  r.terms["Gamma_lambda_n_B"] = gamma_lambda_n_b;
  if (beta == 1.0) {
    r.lower = kInfinity;
    r.upper = kInfinity;
    r.terms["gamma_kappa_B"] = kInfinity;
    r.terms["Gamma_kappa_B"] = kInfinity;
    r.diverged_on = "1 - beta";
    return r;
  }
  const double x = 1.0 / kappa_b0 + ensemble_ratio(l1_b0, l1_pf, beta);
  const double gamma_kappa_b = std::max(x, 1.0 / x);
  const double upper_kappa_b = kappa_b0 * (1.0 + ensemble_ratio(l1_b0, l1_pf, beta));
  r.terms["gamma_kappa_B"] = gamma_kappa_b;
  r.terms["Gamma_kappa_B"] = upper_kappa_b;

  r.lower = std::max({1.0 / upper_kappa_b + (1.0 - beta) * ln_b0 * l1_k,
                      1.0 / (1.0 / gamma_kappa_b + gamma_lambda_n_b * l1_k), 1.0});
  r.upper = upper_kappa_b + ((1.0 - beta) * l1_b0 + beta * l1_pf) * l1_k;
  return r;
}

}  // namespace

const char* to_string(Theorem theorem) {
  switch (theorem) {
    case Theorem::Lemma1Max: return "Lemma1_lambda_max";
    case Theorem::Lemma1Min: return "Lemma1_lambda_min";
    case Theorem::Lemma2: return "Lemma2";
    case Theorem::Thm3: return "Thm3";
    case Theorem::Thm4: return "Thm4";
    case Theorem::Coro2: return "Coro2";
    case Theorem::Thm5: return "Thm5";
    case Theorem::Thm6: return "Thm6";
  }
  return "Unknown";
}

double sandwich_slack(double kappa) {
  return kappa > tolerance::kIllConditionedKappa ? tolerance::kSandwichIllConditioned
                                                 : tolerance::kSandwich;
}

bool BoundReport::brackets(double value, double relative_slack) const {
  if (std::isnan(value)) return false;
  const bool above = std::isinf(lower) ? std::isinf(value) : value >= lower * (1.0 - relative_slack);
  const bool below = std::isinf(upper) || value <= upper * (1.0 + relative_slack);
  return above && below;
}

void to_json(nlohmann::json& j, const BoundReport& report) {
  // JSON has no infinity; divergent values are written as the string "inf".
  auto number = [](double v) -> nlohmann::json {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
  };
  j = nlohmann::json::object();
  j["theorem"] = to_string(report.theorem);
  j["lower"] = number(report.lower);
  j["upper"] = number(report.upper);
  nlohmann::json terms = nlohmann::json::object();
  for (const auto& [name, value] : report.terms) terms[name] = number(value);
  j["terms"] = terms;
  if (!report.diverged_on.empty()) j["diverged_on"] = report.diverged_on;
}

Lemma1Bounds bounds_lemma1(double l1_b0, double ln_b0, double l1_pf, double beta) {
  check_background(l1_b0, ln_b0, l1_pf);
  check_weight(beta);
  const std::map<std::string, double> terms{
      {"lambda1_B0", l1_b0}, {"lambdan_B0", ln_b0}, {"lambda1_Pf", l1_pf}, {"beta", beta}};
  Lemma1Bounds out;
  out.lambda_max.theorem = Theorem::Lemma1Max;
  out.lambda_max.terms = terms;
  out.lambda_max.lower = std::max((1.0 - beta) * l1_b0, beta * l1_pf + (1.0 - beta) * ln_b0);
  out.lambda_max.upper = (1.0 - beta) * l1_b0 + beta * l1_pf;
  out.lambda_min.theorem = Theorem::Lemma1Min;
  out.lambda_min.terms = terms;
  out.lambda_min.lower = (1.0 - beta) * ln_b0;
  out.lambda_min.upper = std::min((1.0 - beta) * l1_b0, beta * l1_pf + (1.0 - beta) * ln_b0);
  return out;
}

BoundReport bounds_kappa_b(double l1_b0, double ln_b0, double l1_pf, double beta) {
  check_background(l1_b0, ln_b0, l1_pf);
  check_weight(beta);
  const double kappa_b0 = l1_b0 / ln_b0;
  BoundReport r;
  r.theorem = Theorem::Lemma2;
  r.terms = {{"lambda1_B0", l1_b0}, {"lambdan_B0", ln_b0}, {"kappa_B0", kappa_b0},
             {"lambda1_Pf", l1_pf}, {"beta", beta}};
  if (beta == 1.0) {
    r.lower = r.upper = kInfinity;
    r.diverged_on = "1 - beta";
    return r;
  }
  const double ratio = ensemble_ratio(l1_b0, l1_pf, beta);
  const double x = 1.0 / kappa_b0 + ratio;
  r.lower = std::max(x, 1.0 / x);
  r.upper = kappa_b0 * (1.0 + ratio);
  r.terms["gamma_kappa_B"] = r.lower;
  r.terms["Gamma_kappa_B"] = r.upper;
  return r;
}

BoundReport bounds_thm3(double kappa_b, double l1_b, double ln_b, double l1_k) {
  require(ln_b > 0.0 && l1_b >= ln_b, ErrorCode::InvalidArgument, "need l1(B) >= ln(B) > 0");
  require(kappa_b >= 1.0 - 1e-12, ErrorCode::InvalidArgument, "kappa(B) must be >= 1");
  require(l1_k >= 0.0, ErrorCode::InvalidArgument, "need l1(K) >= 0");
  BoundReport r;
  r.theorem = Theorem::Thm3;
  r.terms = {{"kappa_B", kappa_b}, {"lambda1_B", l1_b}, {"lambdan_B", ln_b}, {"lambda1_K", l1_k}};
  const double t = 1.0 + l1_b * l1_k;
  r.lower = std::max(kappa_b / t, t / kappa_b);
  r.upper = (1.0 + ln_b * l1_k) * kappa_b;
  return r;
}

BoundReport bounds_thm4(double l1_b0, double ln_b0, double kappa_b0, double l1_pf, double l1_k,
                        double beta) {
  return thm4_like(Theorem::Thm4, l1_b0, ln_b0, kappa_b0, l1_pf, l1_k, beta);
}

BoundReport bounds_coro2(double l1_b0, double ln_b0, double kappa_b0, double l1_pf, double sigma2_r,
                         double beta) {
  require(sigma2_r > 0.0, ErrorCode::NonPositiveVariance, "sigma2_R must be positive");
  BoundReport r = thm4_like(Theorem::Coro2, l1_b0, ln_b0, kappa_b0, l1_pf, 1.0 / sigma2_r, beta);
  r.terms["sigma2_R"] = sigma2_r;
  return r;
}

BoundReport bounds_thm5(double l1_b0, double ln_b0, double l1_pf, double l1_k, double beta) {
  check_background(l1_b0, ln_b0, l1_pf);
  check_weight(beta);
  require(l1_k >= 0.0, ErrorCode::InvalidArgument, "need l1(K) >= 0");
  const double l1_k2 = l1_k * l1_k;
  const double mix = std::max(0.0, beta - beta * beta);
  BoundReport r;
  r.theorem = Theorem::Thm5;
  r.terms = {{"lambda1_B0", l1_b0}, {"lambdan_B0", ln_b0}, {"lambda1_Pf", l1_pf},
             {"lambda1_K", l1_k},   {"lambda1_K2", l1_k2}, {"beta", beta}};
  if (l1_b0 + l1_pf > 0.0) r.terms["switch_beta"] = switch_point(l1_b0, l1_pf);
  r.upper = 1.0 + std::sqrt(mix * l1_b0 * l1_pf * l1_k2) +
            std::max((1.0 - beta) * l1_b0 * l1_k, beta * l1_pf * l1_k);
  r.lower = 1.0 + std::max((1.0 - beta) * l1_k * ln_b0, std::sqrt(mix * ln_b0 * l1_pf * l1_k2));
  return r;
}

BoundReport bounds_thm6(double l1_b0, double l1_pf, double l1_k, double beta) {
  require(l1_b0 > 0.0 && l1_pf >= 0.0 && l1_k >= 0.0, ErrorCode::InvalidArgument,
          "eigenvalue inputs must be non-negative with l1(B0) > 0");
  check_weight(beta);
  BoundReport r;
  r.theorem = Theorem::Thm6;
  r.terms = {{"lambda1_B0", l1_b0}, {"lambda1_Pf", l1_pf}, {"lambda1_K", l1_k}, {"beta", beta}};
  r.lower = 1.0;
  r.upper = 1.0 + ((1.0 - beta) * l1_b0 + beta * l1_pf) * l1_k;
  return r;
}

double switch_point(double l1_b0, double l1_pf) {
  require(l1_b0 >= 0.0 && l1_pf >= 0.0, ErrorCode::InvalidArgument,
          "switch point needs non-negative eigenvalues");
  require(l1_b0 + l1_pf > 0.0, ErrorCode::DegenerateInputs,
          "switch point undefined when both eigenvalues are zero");
  return l1_b0 / (l1_b0 + l1_pf);
}

}  // namespace hybridvar
