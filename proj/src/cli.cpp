#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hybridvar/experiments.hpp"
#include "hybridvar/hessian.hpp"
#include "hybridvar/matrix_io.hpp"
#include "hybridvar/solver.hpp"

namespace hybridvar {

namespace {

struct Overrides {
  std::optional<int> n;
  std::optional<double> l0, lens, sigma2_b0, sigma2_pf, sigma2_r;
  std::optional<int> p, m, h_variant;
  std::optional<std::uint64_t> seed_ensemble, seed_placement, seed_rhs;
  std::vector<double> beta;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--n", n, "grid points");
    cmd->add_option("--l0", l0, "static correlation length scale");
    cmd->add_option("--lens", lens, "ensemble correlation length scale");
    cmd->add_option("--sigma2-b0", sigma2_b0, "static background variance");
    cmd->add_option("--sigma2-pf", sigma2_pf, "ensemble source variance");
    cmd->add_option("--sigma2-r", sigma2_r, "observation error variance");
    cmd->add_option("--p", p, "number of observations");
    cmd->add_option("--m", m, "ensemble size");
    cmd->add_option("--h-variant", h_variant, "observation operator 1..4")->check(CLI::Range(1, 4));
    cmd->add_option("--seed-ensemble", seed_ensemble, "ensemble draw seed");
    cmd->add_option("--seed-placement", seed_placement, "random observation placement seed");
    cmd->add_option("--seed-rhs", seed_rhs, "CG right-hand side seed");
    cmd->add_option("--beta", beta, "beta grid (one or more values)");
  }

  void apply(ExperimentConfig& c) const {
    if (n) c.n = *n;
    if (l0) c.l0 = *l0;
    if (lens) c.lens = *lens;
    if (sigma2_b0) c.sigma2_b0 = *sigma2_b0;
    if (sigma2_pf) c.sigma2_pf = *sigma2_pf;
    if (sigma2_r) c.sigma2_r = *sigma2_r;
    if (p) c.p = *p;
    if (m) c.m = *m;
    if (h_variant) c.h_variant = observation_variant_from_int(*h_variant);
    if (seed_ensemble) c.seeds.ensemble = *seed_ensemble;
    if (seed_placement) c.seeds.placement = *seed_placement;
    if (seed_rhs) c.seeds.rhs = *seed_rhs;
    if (!beta.empty()) c.beta_grid = beta;
  }
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NearSingularBackground:
    case ErrorCode::NotPositiveSemidefinite:
    case ErrorCode::NotSymmetric:
    case ErrorCode::IndefiniteDetected:
    case ErrorCode::DegenerateInputs:
      return kExitNumerical;
    default:
      return kExitConfig;
  }
}

void report_error(std::ostream& err, const std::string& code, const std::string& message) {
  err << nlohmann::json{{"error", code}, {"message", message}}.dump() << '\n';
}

void dump_matrices(const std::filesystem::path& dir, const ExperimentConfig& config) {
  const SweepContext ctx = build_context(config);
  std::filesystem::create_directories(dir);
  write_matrix_binary(dir / "B0.bin", ctx.b0.data);
  write_matrix_binary(dir / "Xf.bin", ctx.xf.data);
  write_matrix_binary(dir / "H0.bin", ctx.h.matrix);
  write_matrix_binary(dir / "K.bin", ctx.k);
  for (double beta : config.betas()) {
    char stem[48];
    std::snprintf(stem, sizeof stem, "S_beta_%.4f", beta);
    try {
      if (config.preconditioned) {
        const auto uh = assemble_cvt_factor(ctx.u, ctx.xf.data, beta);
        write_hessian(dir / stem, assemble_preconditioned(uh, ctx.k));
      } else {
        write_hessian(dir / stem, assemble_unpreconditioned(hybrid_b(ctx.b0, ctx.pf, beta), ctx.k));
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NearSingularBackground) throw;
    }
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conditioning of hybrid variational data assimilation Hessians"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kLibraryVersion);

  unsigned threads = 1;
  std::string out_dir = "runs";
  if (const char* env = std::getenv("HYBRIDVAR_OUT")) out_dir = env;
  std::string config_path;
  app.add_option("--threads", threads, "worker threads for sweep points (0 = all cores)");
  app.add_option("--out", out_dir, "output directory (default $HYBRIDVAR_OUT or ./runs)");
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);

  auto* figure = app.add_subcommand("figure", "run a named figure preset end to end");
  std::string figure_id;
  figure->add_option("id", figure_id, "fig1..fig8")->required();

  Overrides sweep_over;
  bool sweep_pre = false, dump = false;
  auto* sweep = app.add_subcommand("sweep", "beta sweep with exact kappa and all bounds");
  sweep_over.add_to(sweep);
  sweep->add_flag("--preconditioned", sweep_pre, "CVT-preconditioned Hessian");
  sweep->add_flag("--dump-matrices", dump, "also write B0, X_f, H0, K and each Hessian as .bin");

  Overrides cg_over;
  std::vector<double> tols{kDefaultCgTolerance};
  auto* cg = app.add_subcommand("cg", "CG iteration counts, unpreconditioned and CVT");
  cg_over.add_to(cg);
  cg->add_option("--tol", tols, "relative residual tolerances");

  Overrides eig_over;
  std::vector<double> lengths;
  int seed_count = 10;
  auto* eig = app.add_subcommand("eigencurve", "l1(B0) and l1(P_f) against length scale");
  eig_over.add_to(eig);
  eig->add_option("--lengths", lengths, "length scales (default 0.1..2.0 step 0.1)");
  eig->add_option("--seeds", seed_count, "ensemble seeds per length")->check(CLI::PositiveNumber);

  int trials = 200;
  std::uint64_t validate_seed = 7;
  auto* validate = app.add_subcommand("validate", "randomized bound-sandwich suite");
  validate->add_option("--trials", trials, "random configurations")->check(CLI::NonNegativeNumber);
  validate->add_option("--seed", validate_seed, "suite seed");

  double l1_b0 = 0, ln_b0 = 0, l1_pf = 0, l1_k = 0, beta = 0;
  std::optional<double> bounds_sigma2_r;
  auto* bounds = app.add_subcommand("bounds", "evaluate the bound formulas from eigenvalues");
  bounds->add_option("--l1B0", l1_b0, "largest eigenvalue of B0")->required();
  bounds->add_option("--lnB0", ln_b0, "smallest eigenvalue of B0")->required();
  bounds->add_option("--l1Pf", l1_pf, "largest eigenvalue of P_f")->required();
  bounds->add_option("--l1K", l1_k, "largest eigenvalue of K")->required();
  bounds->add_option("--beta", beta, "hybrid weight")->required();
  bounds->add_option("--sigma2-r", bounds_sigma2_r, "selection-H observation variance (adds Coro2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    report_error(err, "ConfigParseError", e.what());
    return kExitConfig;
  }

  try {
    auto base = [&](ExperimentConfig c) {
      if (!config_path.empty()) c = load_config(config_path, c);
      c.threads = threads;
      return c;
    };
    auto written = [&](const std::string& name) {
      out << (std::filesystem::path(out_dir) / (name + ".csv")).string() << '\n';
    };

    if (*figure) {
      for (const auto& name : run_figure(figure_id, out_dir, threads))
        out << (std::filesystem::path(out_dir) / name).string() << '\n';
    } else if (*sweep) {
      ExperimentConfig c = base({});
      sweep_over.apply(c);
      if (sweep_pre) c.preconditioned = true;
      c.validate();
      const auto start = std::chrono::steady_clock::now();
      const auto result = run_beta_sweep(c);
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      const std::string name = c.preconditioned ? "sweep_preconditioned" : "sweep_unpreconditioned";
      write_output(out_dir, name, sweep_table(result), output_metadata(c, name, {}, seconds));
      written(name);
      if (dump) dump_matrices(std::filesystem::path(out_dir) / (name + "_matrices"), c);
      if (result.violation_count() > 0) {
        for (const auto& r : result.records)
          for (const auto& v : r.violations) err << v << '\n';
        return kExitValidation;
      }
    } else if (*cg) {
      ExperimentConfig c = base({});
      cg_over.apply(c);
      c.validate();
      const auto start = std::chrono::steady_clock::now();
      const auto study = run_cg_study(c, tols);
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      for (bool pre : {false, true}) {
        ExperimentConfig meta = c;
        meta.preconditioned = pre;
        const std::string name = pre ? "cg_preconditioned" : "cg_unpreconditioned";
        write_output(out_dir, name,
                     cg_table(pre ? study.preconditioned : study.unpreconditioned, pre),
                     output_metadata(meta, name, {}, seconds));
        written(name);
      }
    } else if (*eig) {
      ExperimentConfig c = base({});
      eig_over.apply(c);
      c.validate();
      if (lengths.empty()) lengths = uniform_grid(0.1, 2.0, 20);
      const auto start = std::chrono::steady_clock::now();
      const auto curve = run_eigen_vs_lengthscale(c, lengths, seed_count);
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      write_output(out_dir, "eigencurve", eigen_curve_table(curve),
                   output_metadata(c, "eigencurve", {}, seconds));
      written("eigencurve");
    } else if (*validate) {
      const auto report = run_validation(trials, validate_seed);
      for (const auto& v : report.violations) err << v << '\n';
      out << nlohmann::json{{"trials", report.trials},
                            {"checks", report.checks},
                            {"violations", report.violations.size()},
                            {"seconds", report.seconds}}
                 .dump()
          << '\n';
      return report.passed() ? kExitOk : kExitValidation;
    } else if (*bounds) {
      const double kappa_b0 = l1_b0 / ln_b0;
      nlohmann::json j;
      j["Lemma2"] = bounds_kappa_b(l1_b0, ln_b0, l1_pf, beta);
      j["Thm4"] = bounds_thm4(l1_b0, ln_b0, kappa_b0, l1_pf, l1_k, beta);
      if (bounds_sigma2_r)
        j["Coro2"] = bounds_coro2(l1_b0, ln_b0, kappa_b0, l1_pf, *bounds_sigma2_r, beta);
      j["Thm5"] = bounds_thm5(l1_b0, ln_b0, l1_pf, l1_k, beta);
      j["Thm6"] = bounds_thm6(l1_b0, l1_pf, l1_k, beta);
      j["switch_beta"] = switch_point(l1_b0, l1_pf);
      out << j.dump(2) << '\n';
    }
  } catch (const Error& e) {
    report_error(err, to_string(e.code()), e.what());
    return exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    report_error(err, "IoError", e.what());
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace hybridvar
