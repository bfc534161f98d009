#include "hybridvar/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "hybridvar/hessian.hpp"
#include "hybridvar/linalg.hpp"
#include "parallel.hpp"

namespace hybridvar {

namespace {

using json = nlohmann::json;

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return key == a; });
    if (!known) throw Error(ErrorCode::ConfigParseError, "unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read_key(const json& j, const char* key, T& target) {
  if (!j.contains(key)) return;
  try {
    target = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigParseError, std::string("bad value for '") + key + "': " + e.what());
  }
}

// Sandwich check: relative slack from sandwich_slack plus an absolute floor
// for quantities that can legitimately sit at zero.
void check_bound(SweepRecord& rec, const BoundReport& r, double value, double absolute = 0.0) {
  const bool ok = r.brackets(value, sandwich_slack(value)) ||
                  (std::isfinite(value) && value >= r.lower - absolute && value <= r.upper + absolute);
  if (ok) return;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s beta=%.6g: value %.12g outside [%.12g, %.12g]",
                to_string(r.theorem), rec.beta, value, r.lower, r.upper);
  rec.violations.emplace_back(buf);
}

}  // namespace

void ExperimentConfig::validate() const {
  require(n >= 3, ErrorCode::ConfigParseError, "n must be at least 3");
  require(m >= 2 && m < n, ErrorCode::ConfigParseError, "need 2 <= m < n");
  require(p >= 1 && p <= n, ErrorCode::ConfigParseError, "need 1 <= p <= n");
  require(radius > 0 && l0 > 0 && lens > 0, ErrorCode::ConfigParseError,
          "radius and length scales must be positive");
  require(sigma2_b0 > 0 && sigma2_pf > 0 && sigma2_r > 0, ErrorCode::ConfigParseError,
          "variances must be positive");
  require(time_levels == 0, ErrorCode::ConfigParseError,
          "experiments run the single-time case only (time_levels = 0)");
  for (std::size_t i = 0; i < beta_grid.size(); ++i) {
    require(beta_grid[i] >= 0.0 && beta_grid[i] <= 1.0, ErrorCode::ConfigParseError,
            "beta grid values must lie in [0, 1]");
    require(i == 0 || beta_grid[i] > beta_grid[i - 1], ErrorCode::ConfigParseError,
            "beta grid must be strictly increasing");
  }
}

std::vector<double> ExperimentConfig::betas() const {
  return beta_grid.empty() ? default_beta_grid(preconditioned) : beta_grid;
}

void to_json(json& j, const ExperimentConfig& c) {
  j = json{{"grid", {{"n", c.n}, {"radius", c.radius}}},
           {"background", {{"l0", c.l0}, {"sigma2_b0", c.sigma2_b0}}},
           {"ensemble", {{"m", c.m}, {"lens", c.lens}, {"sigma2_pf", c.sigma2_pf}, {"seed", c.seeds.ensemble}}},
           {"observation",
            {{"p", c.p},
             {"h_variant", static_cast<int>(c.h_variant)},
             {"sigma2_r", c.sigma2_r},
             {"seed", c.seeds.placement},
             {"time_levels", c.time_levels}}},
           {"rhs_seed", c.seeds.rhs},
           {"preconditioned", c.preconditioned},
           {"beta_grid", c.betas()},
           {"figure_id", c.figure_id}};
}

ExperimentConfig config_from_json(const json& j, ExperimentConfig c) {
  require(j.is_object(), ErrorCode::ConfigParseError, "config must be a JSON object");
  reject_unknown_keys(j, {"grid", "background", "ensemble", "observation", "rhs_seed",
                          "preconditioned", "beta_grid", "figure_id", "threads"},
                      "config");
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    reject_unknown_keys(g, {"n", "radius"}, "grid");
    read_key(g, "n", c.n);
    read_key(g, "radius", c.radius);
  }
  if (j.contains("background")) {
    const auto& b = j.at("background");
    reject_unknown_keys(b, {"l0", "sigma2_b0"}, "background");
    read_key(b, "l0", c.l0);
    read_key(b, "sigma2_b0", c.sigma2_b0);
  }
  if (j.contains("ensemble")) {
    const auto& e = j.at("ensemble");
    reject_unknown_keys(e, {"m", "lens", "sigma2_pf", "seed"}, "ensemble");
    read_key(e, "m", c.m);
    read_key(e, "lens", c.lens);
    read_key(e, "sigma2_pf", c.sigma2_pf);
    read_key(e, "seed", c.seeds.ensemble);
  }
  if (j.contains("observation")) {
    const auto& o = j.at("observation");
    reject_unknown_keys(o, {"p", "h_variant", "sigma2_r", "seed", "time_levels"}, "observation");
    read_key(o, "p", c.p);
    int variant = static_cast<int>(c.h_variant);
    read_key(o, "h_variant", variant);
    if (variant < 1 || variant > 4) throw Error(ErrorCode::ConfigParseError, "h_variant must be 1..4");
    c.h_variant = static_cast<ObservationVariant>(variant);
    read_key(o, "sigma2_r", c.sigma2_r);
    read_key(o, "seed", c.seeds.placement);
    read_key(o, "time_levels", c.time_levels);
  }
  read_key(j, "rhs_seed", c.seeds.rhs);
  read_key(j, "preconditioned", c.preconditioned);
  read_key(j, "figure_id", c.figure_id);
  read_key(j, "threads", c.threads);
  if (j.contains("beta_grid")) {
    const auto& g = j.at("beta_grid");
    if (g.is_array()) {
      read_key(j, "beta_grid", c.beta_grid);
    } else if (g.is_object()) {
      reject_unknown_keys(g, {"min", "max", "count"}, "beta_grid");
      double lo = 0.0, hi = 1.0;
      int count = 51;
      read_key(g, "min", lo);
      read_key(g, "max", hi);
      read_key(g, "count", count);
      require(count >= 1 && lo <= hi, ErrorCode::ConfigParseError, "bad beta_grid range");
      c.beta_grid = uniform_grid(lo, hi, count);
    } else {
      throw Error(ErrorCode::ConfigParseError, "beta_grid must be an array or {min,max,count}");
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  require(in.is_open(), ErrorCode::IoError, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigParseError, std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j, std::move(base));
}

std::vector<double> uniform_grid(double lo, double hi, int count) {
  require(count >= 1, ErrorCode::InvalidArgument, "grid needs at least one point");
  std::vector<double> grid(static_cast<std::size_t>(count));
  if (count == 1) {
    grid[0] = lo;
    return grid;
  }
  for (int i = 0; i < count; ++i)
    grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
  grid.back() = hi;
  return grid;
}

std::vector<double> default_beta_grid(bool preconditioned) {
  return preconditioned ? uniform_grid(0.0, 1.0, 51) : uniform_grid(0.0, 0.99, 50);
}

SweepContext build_context(const ExperimentConfig& config) {
  config.validate();
  SweepContext ctx;
  ctx.config = config;
  const GridGeometry geom(config.n, config.radius);
  ctx.b0 = build_static_b(geom, config.l0, config.sigma2_b0);
  const auto b1 = build_static_b(geom, config.lens, config.sigma2_pf);
  ctx.xf = sample_ensemble_factor(b1, config.m, config.seeds.ensemble);
  ctx.pf = ensemble_covariance(ctx.xf);
  ctx.pf.params.length_scale = config.lens;
  ctx.pf.params.variance = config.sigma2_pf;
  ctx.h = build_h(config.h_variant, config.n, config.p, config.seeds.placement);
  ctx.k = build_k(observation_setup_3d(ctx.h, config.sigma2_r));

  const VectorXd w_b0 = symmetric_eigenvalues(ctx.b0.data);
  ctx.l1_b0 = w_b0(w_b0.size() - 1);
  ctx.ln_b0 = w_b0(0);
  ctx.kappa_b0 = ctx.l1_b0 / ctx.ln_b0;
  ctx.l1_pf = lambda_max(ctx.pf.data);
  ctx.l1_k = lambda_max(ctx.k);
  if (config.preconditioned) ctx.u = sym_sqrt(ctx.b0.data);
  return ctx;
}

SweepRecord evaluate_point(const SweepContext& ctx, double beta, bool preconditioned) {
  const auto start = std::chrono::steady_clock::now();
  SweepRecord rec;
  rec.beta = beta;
  rec.preconditioned = preconditioned;

  if (!preconditioned) {
    const auto b = hybrid_b(ctx.b0, ctx.pf, beta);
    const SpectralSummary bs = spectral_summary(b.data);
    rec.background = bs;
    const auto lemma1 = bounds_lemma1(ctx.l1_b0, ctx.ln_b0, ctx.l1_pf, beta);
    const double eig_floor = 1e-12 * bs.lambda_max;
    rec.bounds.push_back(lemma1.lambda_max);
    rec.bounds.push_back(lemma1.lambda_min);
    check_bound(rec, lemma1.lambda_max, bs.lambda_max, eig_floor);
    check_bound(rec, lemma1.lambda_min, bs.lambda_min, eig_floor);
    const auto lemma2 = bounds_kappa_b(ctx.l1_b0, ctx.ln_b0, ctx.l1_pf, beta);
    rec.bounds.push_back(lemma2);
    if (std::isfinite(bs.kappa)) check_bound(rec, lemma2, bs.kappa);

    try {
      const auto s = assemble_unpreconditioned(b, ctx.k);
      const SpectralSummary ss = spectral_summary(s.data);
      rec.kappa = ss.kappa;
      rec.lambda_max = ss.lambda_max;
      rec.lambda_min = ss.lambda_min;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NearSingularBackground) throw;
      rec.status = to_string(e.code());
      rec.kappa = kInfinity;
    }
    const bool ok = rec.status == "ok";

    BoundReport thm3;
    thm3.theorem = Theorem::Thm3;
    if (ok && bs.lambda_min > 0) {
      thm3 = bounds_thm3(bs.kappa, bs.lambda_max, bs.lambda_min, ctx.l1_k);
      check_bound(rec, thm3, rec.kappa);
    } else {
      thm3.lower = thm3.upper = kInfinity;
      thm3.diverged_on = "lambda_n(B)";
    }
    rec.bounds.push_back(thm3);

    const auto thm4 = bounds_thm4(ctx.l1_b0, ctx.ln_b0, ctx.kappa_b0, ctx.l1_pf, ctx.l1_k, beta);
    rec.bounds.push_back(thm4);
    if (ok) check_bound(rec, thm4, rec.kappa);
    if (is_selection(ctx.config.h_variant)) {
      const auto coro2 =
          bounds_coro2(ctx.l1_b0, ctx.ln_b0, ctx.kappa_b0, ctx.l1_pf, ctx.config.sigma2_r, beta);
      rec.bounds.push_back(coro2);
      if (ok) check_bound(rec, coro2, rec.kappa);
    }
  } else {
    const auto uh = assemble_cvt_factor(ctx.u, ctx.xf.data, beta);
    const auto s = assemble_preconditioned(uh, ctx.k);
    const SpectralSummary ss = spectral_summary(s.data);
    rec.kappa = ss.kappa;
    rec.lambda_max = ss.lambda_max;
    rec.lambda_min = ss.lambda_min;
    const auto thm5 = bounds_thm5(ctx.l1_b0, ctx.ln_b0, ctx.l1_pf, ctx.l1_k, beta);
    const auto thm6 = bounds_thm6(ctx.l1_b0, ctx.l1_pf, ctx.l1_k, beta);
    rec.bounds.push_back(thm5);
    rec.bounds.push_back(thm6);
    check_bound(rec, thm5, rec.kappa);
    check_bound(rec, thm6, rec.kappa);
  }
  rec.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::vector<SweepRecord> run_beta_sweep(const SweepContext& ctx, const std::vector<double>& betas,
                                        bool preconditioned, unsigned threads) {
  std::vector<SweepRecord> records(betas.size());
  detail::parallel_for(betas.size(), threads, [&](std::size_t i) {
    records[i] = evaluate_point(ctx, betas[i], preconditioned);
  });
  return records;
}

std::size_t SweepResult::violation_count() const {
  std::size_t total = 0;
  for (const auto& r : records) total += r.violations.size();
  return total;
}

SweepResult run_beta_sweep(const ExperimentConfig& config) {
  const SweepContext ctx = build_context(config);
  SweepResult out;
  out.config = config;
  out.l1_b0 = ctx.l1_b0;
  out.ln_b0 = ctx.ln_b0;
  out.kappa_b0 = ctx.kappa_b0;
  out.l1_pf = ctx.l1_pf;
  out.l1_k = ctx.l1_k;
  out.switch_beta = switch_point(ctx.l1_b0, ctx.l1_pf);
  out.records = run_beta_sweep(ctx, config.betas(), config.preconditioned, config.threads);
  return out;
}

const char* to_string(ParameterFamily family) {
  switch (family) {
    case ParameterFamily::L0: return "L0";
    case ParameterFamily::Lens: return "Lens";
    case ParameterFamily::SigmaB0: return "sigma_B0";
    case ParameterFamily::SigmaPf: return "sigma_Pf";
    case ParameterFamily::SigmaR: return "sigma_R";
    case ParameterFamily::HVariant: return "H_variant";
    case ParameterFamily::P: return "p";
    case ParameterFamily::M: return "m";
  }
  return "unknown";
}

ParameterFamily parameter_family_from_string(const std::string& name) {
  for (auto f : {ParameterFamily::L0, ParameterFamily::Lens, ParameterFamily::SigmaB0,
                 ParameterFamily::SigmaPf, ParameterFamily::SigmaR, ParameterFamily::HVariant,
                 ParameterFamily::P, ParameterFamily::M}) {
    if (name == to_string(f)) return f;
  }
  throw Error(ErrorCode::ConfigParseError, "unknown parameter family '" + name + "'");
}

ExperimentConfig with_parameter(ExperimentConfig config, ParameterFamily family, double value) {
  switch (family) {
    case ParameterFamily::L0: config.l0 = value; break;
    case ParameterFamily::Lens: config.lens = value; break;
    case ParameterFamily::SigmaB0: config.sigma2_b0 = value; break;
    case ParameterFamily::SigmaPf: config.sigma2_pf = value; break;
    case ParameterFamily::SigmaR: config.sigma2_r = value; break;
    case ParameterFamily::HVariant:
      config.h_variant = observation_variant_from_int(static_cast<int>(std::lround(value)));
      break;
    case ParameterFamily::P: config.p = static_cast<Index>(std::lround(value)); break;
    case ParameterFamily::M: config.m = static_cast<Index>(std::lround(value)); break;
  }
  return config;
}

FamilyResult run_parameter_family(const ExperimentConfig& config, ParameterFamily family,
                                  const std::vector<double>& values) {
  FamilyResult out{family, values, {}};
  out.sweeps.reserve(values.size());
  for (double v : values) out.sweeps.push_back(run_beta_sweep(with_parameter(config, family, v)));
  return out;
}

double EigenCurve::pf_mean(std::size_t l) const {
  const auto& row = lambda1_pf.at(l);
  double sum = 0;
  for (double v : row) sum += v;
  return row.empty() ? 0.0 : sum / static_cast<double>(row.size());
}

double EigenCurve::pf_std(std::size_t l) const {
  const auto& row = lambda1_pf.at(l);
  if (row.size() < 2) return 0.0;
  const double mean = pf_mean(l);
  double ss = 0;
  for (double v : row) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(row.size() - 1));
}

EigenCurve run_eigen_vs_lengthscale(const ExperimentConfig& config,
                                    const std::vector<double>& lengths, int seed_count) {
  config.validate();
  require(seed_count >= 1, ErrorCode::InvalidArgument, "need at least one seed");
  EigenCurve curve;
  curve.lengths = lengths;
  for (int s = 0; s < seed_count; ++s)
    curve.seeds.push_back(config.seeds.ensemble + static_cast<std::uint64_t>(s));
  curve.lambda1_b0.resize(lengths.size());
  curve.lambda1_pf.assign(lengths.size(), std::vector<double>(curve.seeds.size()));

  const GridGeometry geom(config.n, config.radius);
  detail::parallel_for(lengths.size(), config.threads, [&](std::size_t l) {
    const auto b0 = build_static_b(geom, lengths[l], config.sigma2_b0);
    curve.lambda1_b0[l] = lambda_max(b0.data);
    const auto b1 = build_static_b(geom, lengths[l], config.sigma2_pf);
    for (std::size_t s = 0; s < curve.seeds.size(); ++s) {
      const auto xf = sample_ensemble_factor(b1, config.m, curve.seeds[s]);
      // Nonzero spectrum of X X^T equals that of the m x m Gram matrix X^T X.
      const MatrixXd gram = symmetrized(xf.data.transpose() * xf.data);
      curve.lambda1_pf[l][s] = lambda_max(gram);
    }
  });
  return curve;
}

}  // namespace hybridvar
