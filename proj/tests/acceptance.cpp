// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failing criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "hybridvar/experiments.hpp"
#include "hybridvar/hessian.hpp"
#include "hybridvar/solver.hpp"
#include "oracles.hpp"

using namespace hybridvar;

namespace tol {
constexpr double kSandwich = 1e-9;
constexpr int kSandwichTrials = 200;
constexpr std::uint64_t kSandwichSeed = 7;
constexpr double kSandwichSeconds = 60;
constexpr double kFig1Kappa = 1e6;
constexpr double kFig1MonotoneFrom = 0.5;
constexpr double kFig1DivergenceRatio = 10;
constexpr double kFig1PreconditionedCap = 1e4;
constexpr double kFig1Seconds = 300;
constexpr double kSwitchWindow = 0.1;
constexpr double kSwitchSeconds = 600;
constexpr double kGapBetaMax = 0.9;
constexpr double kGapLow = 0.0;
constexpr double kGapHigh = 3.5;
constexpr double kBoundInvariance = 1e-12;
constexpr double kKappaVaries = 1e-6;
constexpr double kCoro2 = 1e-10;
constexpr double kSpearman = 0.6;
constexpr int kCgGridPoints = 20;
constexpr double kCgTolerance = 1e-6;
constexpr int kCgEndWindow = 2;
constexpr double kCgSeconds = 600;
constexpr int kOraclePairs = 500;
constexpr int kOracleMaxDim = 30;
constexpr double kSqrtReconstruction = 1e-10;
}  // namespace tol

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

int failures = 0;

void verdict(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  failures += !pass;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const BoundReport& find(const SweepRecord& r, Theorem t) {
  for (const auto& b : r.bounds)
    if (b.theorem == t) return b;
  throw Error(ErrorCode::InvalidArgument, std::string("record has no ") + to_string(t));
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j) + 1.0;
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += rx[i] / n, my += ry[i] / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

void criterion1() {
  const auto start = Clock::now();
  const auto report = run_validation(tol::kSandwichTrials, tol::kSandwichSeed);
  const double seconds = since(start);
  std::map<std::string, int> by_bound;
  for (const auto& v : report.violations) {
    const auto colon = v.find("): ");
    by_bound[v.substr(colon + 3, v.find(' ', colon + 3) - colon - 3)]++;
  }
  std::string breakdown;
  for (const auto& [name, count] : by_bound) breakdown += fmt(" %s=%d", name.c_str(), count);
  for (const auto& v : report.violations) std::printf("    %s\n", v.c_str());
  verdict(1, "bound sandwich (200 random small configs)",
          report.passed() && seconds < tol::kSandwichSeconds,
          fmt("%zu violations in %ld checks,%s %.1fs (slack %.0e)", report.violations.size(),
              report.checks, breakdown.empty() ? " none" : breakdown.c_str(), seconds, tol::kSandwich));
}

void criterion2() {
  const auto start = Clock::now();
  ExperimentConfig c = figure_preset("fig1").config;
  const auto unpre = run_beta_sweep(c);
  c.preconditioned = true;
  const auto pre = run_beta_sweep(c);
  const double seconds = since(start);

  bool monotone = true, above = true, bound_grows = true;
  double prev_kappa = 0, prev_upper = 0;
  for (const auto& r : unpre.records) {
    const double upper = find(r, Theorem::Thm4).upper;
    above = above && upper > r.kappa;
    if (r.beta >= tol::kFig1MonotoneFrom) {
      monotone = monotone && r.kappa > prev_kappa;
      bound_grows = bound_grows && upper > prev_upper;
      prev_kappa = r.kappa;
      prev_upper = upper;
    }
  }
  const auto& first = unpre.records.front();
  const auto& last = unpre.records.back();
  const double bound_ratio = find(last, Theorem::Thm4).upper / find(first, Theorem::Thm4).upper;
  double pre_max = 0;
  for (const auto& r : pre.records) pre_max = std::max(pre_max, r.kappa);
  const bool pass = monotone && last.beta == 0.99 && last.kappa > tol::kFig1Kappa && above &&
                    bound_grows && bound_ratio >= tol::kFig1DivergenceRatio &&
                    pre.records.back().beta == 1.0 && pre_max < tol::kFig1PreconditionedCap &&
                    seconds < tol::kFig1Seconds;
  verdict(2, "fig1 reproduction", pass,
          fmt("kappa monotone beyond 0.5: %s, kappa(0.99)=%.3e, Thm4 upper above kappa everywhere: %s, "
              "Thm4 upper rising beyond 0.5: %s (x%.1f from beta=0), max preconditioned kappa "
              "(incl. beta=1)=%.2f, %.1fs",
              monotone ? "yes" : "no", last.kappa, above ? "yes" : "no", bound_grows ? "yes" : "no",
              bound_ratio, pre_max, seconds));
}

void criterion3() {
  const auto start = Clock::now();
  ExperimentConfig base = figure_preset("fig5").config;
  bool pass = true;
  std::string detail;
  for (auto family : {ParameterFamily::L0, ParameterFamily::Lens, ParameterFamily::SigmaB0,
                      ParameterFamily::SigmaPf}) {
    const auto values = family_values(family);
    const auto result = run_parameter_family(base, family, values);
    detail += fmt("\n    %s:", to_string(family));
    for (std::size_t v = 0; v < values.size(); ++v) {
      const auto& sweep = result.sweeps[v];
      const auto best = std::min_element(sweep.records.begin(), sweep.records.end(),
                                         [](auto& a, auto& b) { return a.kappa < b.kappa; });
      const bool ok = std::abs(best->beta - sweep.switch_beta) <= tol::kSwitchWindow + 1e-12;
      pass = pass && ok && sweep.records.size() == 51;
      detail += fmt(" [%g: argmin %.2f vs switch %.3f %s]", values[v], best->beta, sweep.switch_beta,
                    ok ? "ok" : "MISS");
    }
  }
  const double seconds = since(start);
  pass = pass && seconds < tol::kSwitchSeconds;
  verdict(3, "switch point predicts preconditioned argmin (+-0.1)", pass,
          fmt("%.1fs", seconds) + detail);
}

void criterion4() {
  ExperimentConfig base = figure_preset("fig3").config;
  double lo = INFINITY, hi = -INFINITY;
  std::string detail;
  for (auto family : {ParameterFamily::L0, ParameterFamily::Lens, ParameterFamily::SigmaPf,
                      ParameterFamily::SigmaB0}) {
    const auto result = run_parameter_family(base, family, family_values(family));
    double flo = INFINITY, fhi = -INFINITY;
    for (const auto& sweep : result.sweeps) {
      for (const auto& r : sweep.records) {
        if (r.beta > tol::kGapBetaMax) continue;
        const double gap = std::log10(find(r, Theorem::Thm4).upper) - std::log10(r.kappa);
        flo = std::min(flo, gap);
        fhi = std::max(fhi, gap);
      }
    }
    lo = std::min(lo, flo);
    hi = std::max(hi, fhi);
    detail += fmt(" %s [%.3f, %.3f]", to_string(family), flo, fhi);
  }
  verdict(4, "Thm4 magnitude gap on fig3 settings (beta <= 0.9)", lo >= tol::kGapLow && hi <= tol::kGapHigh,
          fmt("log10 gap in [%.3f, %.3f], required [%.1f, %.1f];", lo, hi, tol::kGapLow, tol::kGapHigh) +
              detail);
}

void criterion5() {
  ExperimentConfig base = figure_preset("fig4").config;
  const std::vector<double> ps{50, 100, 200};
  double worst_bound = 0, kappa_spread = 0;
  for (bool pre : {false, true}) {
    base.preconditioned = pre;
    const auto result = run_parameter_family(base, ParameterFamily::P, ps);
    const Theorem t = pre ? Theorem::Thm5 : Theorem::Thm4;
    for (std::size_t i = 0; i < result.sweeps[0].records.size(); ++i) {
      const double ref = find(result.sweeps[0].records[i], t).upper;
      double kmin = INFINITY, kmax = 0;
      for (const auto& s : result.sweeps) {
        const double u = find(s.records[i], t).upper;
        if (std::isfinite(ref)) worst_bound = std::max(worst_bound, std::abs(u - ref) / ref);
        kmin = std::min(kmin, s.records[i].kappa);
        kmax = std::max(kmax, s.records[i].kappa);
      }
      if (std::isfinite(kmax)) kappa_spread = std::max(kappa_spread, (kmax - kmin) / kmin);
    }
  }
  verdict(5, "bounds independent of p while kappa depends on p",
          worst_bound <= tol::kBoundInvariance && kappa_spread > tol::kKappaVaries,
          fmt("max relative Thm4/Thm5 upper difference across p=50,100,200: %.2e; max relative kappa "
              "spread: %.3f",
              worst_bound, kappa_spread));
}

void criterion6() {
  double worst_l1 = 0, worst_bound = 0;
  ExperimentConfig c = figure_preset("fig4").config;
  for (int variant : {1, 2, 4}) {
    for (double sigma2 : {0.5, 1.0, 2.0}) {
      c.h_variant = observation_variant_from_int(variant);
      c.sigma2_r = sigma2;
      const auto ctx = build_context(c);
      worst_l1 = std::max(worst_l1, std::abs(ctx.l1_k - 1.0 / sigma2) * sigma2);
      for (double beta : {0.0, 0.3, 0.6, 0.9}) {
        const auto coro = bounds_coro2(ctx.l1_b0, ctx.ln_b0, ctx.kappa_b0, ctx.l1_pf, sigma2, beta);
        const auto thm = bounds_thm4(ctx.l1_b0, ctx.ln_b0, ctx.kappa_b0, ctx.l1_pf, ctx.l1_k, beta);
        worst_bound = std::max({worst_bound, std::abs(coro.lower - thm.lower) / thm.lower,
                                std::abs(coro.upper - thm.upper) / thm.upper});
      }
    }
  }
  verdict(6, "Coro2 consistency (selection H, R = sigma2 I)",
          worst_l1 <= tol::kCoro2 && worst_bound <= tol::kCoro2,
          fmt("max relative |l1(K) - 1/sigma2| = %.2e, max relative Coro2 vs explicit-K Thm4 = %.2e",
              worst_l1, worst_bound));
}

void criterion7() {
  const auto start = Clock::now();
  ExperimentConfig c = figure_preset("fig7").config;
  const auto unpre = cg_sweep(c, cg_beta_grid(false), {tol::kCgTolerance});
  std::vector<double> iters, kappas;
  std::string unpre_counts;
  for (const auto& r : unpre) {
    iters.push_back(static_cast<double>(r.iterations));
    kappas.push_back(r.kappa);
    unpre_counts += fmt(" %ld", static_cast<long>(r.iterations));
  }
  const double rho = spearman(iters, kappas);

  c = figure_preset("fig8").config;
  const auto pre = cg_sweep(c, cg_beta_grid(true), {tol::kCgTolerance});
  std::vector<long> counts;
  std::string pre_counts;
  for (const auto& r : pre) {
    counts.push_back(static_cast<long>(r.iterations));
    pre_counts += fmt(" %ld", counts.back());
  }
  const long lo = *std::min_element(counts.begin(), counts.end());
  const long hi = *std::max_element(counts.begin(), counts.end());
  const int n = static_cast<int>(counts.size());
  bool max_at_end = false;
  for (int i = 0; i < n; ++i)
    if (counts[i] == hi && (i < tol::kCgEndWindow || i >= n - tol::kCgEndWindow)) max_at_end = true;
  const bool ends_raised = counts.front() > lo && counts.back() > lo;
  const bool all_ok = std::all_of(unpre.begin(), unpre.end(), [](auto& r) { return r.converged; }) &&
                      std::all_of(pre.begin(), pre.end(), [](auto& r) { return r.converged; });
  const double seconds = since(start);
  const bool pass = static_cast<int>(unpre.size()) == tol::kCgGridPoints && rho >= tol::kSpearman &&
                    max_at_end && ends_raised && all_ok && seconds < tol::kCgSeconds;
  verdict(7, "CG iteration trends", pass,
          fmt("Spearman(iterations, kappa) = %.3f (need >= %.1f); preconditioned: both ends above grid "
              "minimum %ld: %s, maximum %ld at a grid end: %s; %.1fs",
              rho, tol::kSpearman, lo, ends_raised ? "yes" : "no", hi, max_at_end ? "yes" : "no",
              seconds) +
              "\n    unpreconditioned iterations:" + unpre_counts +
              "\n    preconditioned iterations:" + pre_counts);
}

void criterion8() {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<int> dim(2, tol::kOracleMaxDim);
  int weyl = 0, product = 0;
  for (int t = 0; t < tol::kOraclePairs; ++t) {
    const int n = dim(gen);
    weyl += check_weyl_inequality<double>(oracle::random_symmetric(n, gen), oracle::random_symmetric(n, gen));
    std::uniform_int_distribution<int> rank(1, n);
    product += check_product_inequality<double>(oracle::random_psd(n, rank(gen), gen),
                                                oracle::random_psd(n, rank(gen), gen));
  }
  const auto cg = cg_solve<double>(MatrixXd::Identity(50, 50), VectorXd::LinSpaced(50, 1, 2));

  const ExperimentConfig c = figure_preset("fig1").config;
  const GridGeometry g(c.n);
  const auto b0 = build_static_b(g, c.l0, c.sigma2_b0);
  const MatrixXd u = sym_sqrt(b0);
  const double recon = (u * u - b0.data).norm() / b0.data.norm();
  const auto pf = ensemble_covariance(sample_ensemble_factor(build_static_b(g, c.lens, c.sigma2_pf), c.m, c.seeds.ensemble));
  const VectorXd w = symmetric_eigenvalues(pf.data);
  const double cut = tolerance::kPsdRelative * w(w.size() - 1);
  const long rank = (w.array() > cut).count();

  verdict(8, "oracle suites", weyl == tol::kOraclePairs && product == tol::kOraclePairs &&
                                  cg.iterations == 1 && recon < tol::kSqrtReconstruction && rank <= c.m - 1,
          fmt("Weyl %d/%d, product %d/%d, CG on identity %ld iteration(s), sym_sqrt reconstruction "
              "%.2e, rank(P_f) = %ld with m = %ld",
              weyl, tol::kOraclePairs, product, tol::kOraclePairs, static_cast<long>(cg.iterations),
              recon, rank, static_cast<long>(c.m)));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void criterion9() {
  const auto root = std::filesystem::temp_directory_path() / "hybridvar_acceptance_determinism";
  std::filesystem::remove_all(root);
  std::vector<std::string> outs;
  int codes = 0;
  for (const char* run : {"a", "b"}) {
    const std::string dir = (root / run).string();
    const char* argv[] = {"hybridvar", "--out", dir.c_str(), "figure", "fig1"};
    std::ostringstream out, err;
    codes += run_cli(5, argv, out, err);
  }
  bool same = codes == 0;
  int files = 0;
  for (const char* name : {"fig1a_unpreconditioned.csv", "fig1b_preconditioned.csv"}) {
    const auto a = slurp(root / "a" / name), b = slurp(root / "b" / name);
    same = same && !a.empty() && a == b;
    ++files;
  }
  std::filesystem::remove_all(root);
  verdict(9, "determinism of `figure fig1`", same,
          fmt("%d CSVs compared byte for byte, exit codes %s", files, codes == 0 ? "0" : "nonzero"));
}

}  // namespace

int main() {
  const auto start = Clock::now();
  auto guarded = [](int id, void (*f)()) {
    try {
      f();
    } catch (const std::exception& e) {
      verdict(id, "aborted", false, e.what());
    }
  };
  guarded(1, criterion1);
  guarded(2, criterion2);
  guarded(3, criterion3);
  guarded(4, criterion4);
  guarded(5, criterion5);
  guarded(6, criterion6);
  guarded(7, criterion7);
  guarded(8, criterion8);
  guarded(9, criterion9);
  std::printf("%d of 9 criteria failed (%.1fs)\n", failures, since(start));
  return failures;
}
