#include <chrono>

#include "hybridvar/experiments.hpp"
#include "hybridvar/rng.hpp"

namespace hybridvar {

namespace {

ExperimentConfig fig1_config() {
  ExperimentConfig c;
  c.l0 = 0.2;
  c.lens = 0.05;
  c.m = 50;
  c.p = 100;
  c.h_variant = ObservationVariant::RandomPlacement;
  return c;
}

// Shared by the family figures: m = p = 100, all variances 1, H4, L0 = Lens = 0.1.
ExperimentConfig family_base(bool preconditioned) {
  ExperimentConfig c;
  c.l0 = 0.1;
  c.lens = 0.1;
  c.m = 100;
  c.p = 100;
  c.h_variant = ObservationVariant::RandomPlacement;
  c.preconditioned = preconditioned;
  return c;
}

ExperimentConfig cg_base(bool preconditioned) {
  ExperimentConfig c;
  c.l0 = 0.1;
  c.lens = 0.05;
  c.m = 100;
  c.p = 100;
  c.h_variant = ObservationVariant::RandomPlacement;
  c.preconditioned = preconditioned;
  return c;
}

struct Panel {
  std::string name;
  ParameterFamily family;
};

std::vector<Panel> family_panels(const std::string& id) {
  if (id == "fig3" || id == "fig5") {
    const std::string p = id;
    return {{p + "a_L0", ParameterFamily::L0},
            {p + "b_Lens", ParameterFamily::Lens},
            {p + "c_sigma_Pf", ParameterFamily::SigmaPf},
            {p + "d_sigma_B0", ParameterFamily::SigmaB0}};
  }
  return {{id + "a_sigma_R", ParameterFamily::SigmaR},
          {id + "b_H_variant", ParameterFamily::HVariant},
          {id + "c_p", ParameterFamily::P}};
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::vector<std::string> figure_ids() {
  return {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"};
}

FigurePreset figure_preset(const std::string& id) {
  FigurePreset preset;
  preset.id = id;
  if (id == "fig1") {
    preset.description = "beta sweep, unpreconditioned and CVT; Lens=0.05, L0=0.2, m=50, p=100, H4";
    preset.config = fig1_config();
  } else if (id == "fig2") {
    preset.description = "l1(B0) and l1(P_f) against correlation length scale, 10 ensemble seeds";
    preset.config = family_base(false);
  } else if (id == "fig3") {
    preset.description = "unpreconditioned families L0, Lens, sigma_Pf, sigma_B0; m=p=100, H4";
    preset.config = family_base(false);
  } else if (id == "fig4") {
    preset.description = "unpreconditioned families sigma_R, H variant, p; m=100, L0=Lens=0.1";
    preset.config = family_base(false);
  } else if (id == "fig5") {
    preset.description = "CVT families L0, Lens, sigma_Pf, sigma_B0; m=p=100, H4";
    preset.config = family_base(true);
  } else if (id == "fig6") {
    preset.description = "CVT families sigma_R, H variant, p; m=100, L0=Lens=0.1";
    preset.config = family_base(true);
  } else if (id == "fig7") {
    preset.description = "CG iterations, unpreconditioned; L0=0.1, Lens=0.05, p=100, H4, tol 1e-6";
    preset.config = cg_base(false);
  } else if (id == "fig8") {
    preset.description = "CG iterations, CVT; L0=0.1, Lens=0.05, p=100, H4, tol 1e-3..1e-7";
    preset.config = cg_base(true);
  } else {
    throw Error(ErrorCode::UnknownFigure, "unknown figure id '" + id + "'");
  }
  preset.config.figure_id = id;
  return preset;
}

std::vector<double> family_values(ParameterFamily family) {
  switch (family) {
    case ParameterFamily::L0:
    case ParameterFamily::Lens: return {0.05, 0.1, 0.2};
    case ParameterFamily::SigmaB0:
    case ParameterFamily::SigmaPf:
    case ParameterFamily::SigmaR: return {0.5, 1.0, 2.0};
    case ParameterFamily::HVariant: return {1, 2, 3, 4};
    case ParameterFamily::P: return {50, 100, 200};
    case ParameterFamily::M: return {50, 100, 200, 400};
  }
  return {};
}

std::vector<std::string> run_figure(const std::string& id, const std::filesystem::path& out_dir,
                                    unsigned threads) {
  FigurePreset preset = figure_preset(id);
  ExperimentConfig config = preset.config;
  config.threads = threads;
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const ExperimentConfig& c, const Table& table,
                  const std::vector<std::string>& notes, double seconds) {
    write_output(out_dir, name, table, output_metadata(c, name, notes, seconds));
    written.push_back(name + ".csv");
  };

  if (id == "fig1") {
    for (bool pre : {false, true}) {
      const auto start = std::chrono::steady_clock::now();
      ExperimentConfig c = config;
      c.preconditioned = pre;
      const auto sweep = run_beta_sweep(c);
      emit(pre ? "fig1b_preconditioned" : "fig1a_unpreconditioned", c, sweep_table(sweep), {},
           seconds_since(start));
    }
  } else if (id == "fig2") {
    const auto start = std::chrono::steady_clock::now();
    const auto curve = run_eigen_vs_lengthscale(config, uniform_grid(0.1, 2.0, 20), 10);
    emit("fig2_eigenvalues", config, eigen_curve_table(curve),
         {"L grid 0.1..2.0 step 0.1 for both B0 and the ensemble source covariance"},
         seconds_since(start));
  } else if (id == "fig3" || id == "fig4" || id == "fig5" || id == "fig6") {
    for (const auto& panel : family_panels(id)) {
      const auto start = std::chrono::steady_clock::now();
      std::vector<std::string> notes;
      if (panel.family == ParameterFamily::SigmaPf || panel.family == ParameterFamily::SigmaB0)
        notes.push_back(
            "panel c varies sigma2_Pf with sigma2_B0 fixed; panel d varies sigma2_B0 with "
            "sigma2_Pf fixed");
      if (panel.family == ParameterFamily::SigmaB0)
        notes.push_back("bound shape near beta=0 is sensitive to sigma2_B0; compare against kappa directly");
      const auto family = run_parameter_family(config, panel.family, family_values(panel.family));
      emit(panel.name, config, family_table(family), notes, seconds_since(start));
    }
  } else {
    const auto start = std::chrono::steady_clock::now();
    const bool pre = id == "fig8";
    const std::vector<double> tols =
        pre ? std::vector<double>{1e-3, 1e-4, 1e-5, 1e-6, 1e-7} : std::vector<double>{1e-6};
    const auto rows = cg_sweep(config, config.beta_grid.empty() ? cg_beta_grid(pre) : config.beta_grid, tols);
    emit(pre ? "fig8_cg_preconditioned" : "fig7_cg_unpreconditioned", config, cg_table(rows, pre),
         {"relative residual stopping test ||b - S x|| / ||b|| <= tol"}, seconds_since(start));
  }
  return written;
}

ValidationReport run_validation(int trials, std::uint64_t seed) {
  require(trials >= 0, ErrorCode::InvalidArgument, "trial count must be non-negative");
  const auto start = std::chrono::steady_clock::now();
  ValidationReport report;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    Rng rng(seed, static_cast<std::uint64_t>(t));
    auto between = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
    ExperimentConfig c;
    c.n = 12 + static_cast<Index>(rng.below(49));
    c.h_variant = observation_variant_from_int(1 + static_cast<int>(rng.below(4)));
    if (c.h_variant == ObservationVariant::EveryNthPoint ||
        c.h_variant == ObservationVariant::FivePointAverage) {
      std::vector<Index> divisors;
      for (Index d = 1; d < c.n; ++d)
        if (c.n % d == 0) divisors.push_back(d);
      c.p = divisors[rng.below(divisors.size())];
    } else {
      c.p = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(c.n - 1)));
    }
    c.m = 2 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(c.n - 2)));
    c.l0 = between(0.05, 0.5);
    c.lens = between(0.05, 0.5);
    c.sigma2_b0 = between(0.25, 4.0);
    c.sigma2_pf = between(0.25, 4.0);
    c.sigma2_r = between(0.25, 4.0);
    c.seeds.ensemble = rng.below(1u << 30);
    c.seeds.placement = rng.below(1u << 30);
    c.preconditioned = true;
    const double beta_unpre = between(0.0, 0.99);
    const double beta_pre = between(0.0, 1.0);

    const SweepContext ctx = build_context(c);
    for (const auto& rec : {evaluate_point(ctx, beta_unpre, false), evaluate_point(ctx, beta_pre, true)}) {
      report.checks += static_cast<long>(rec.bounds.size());
      for (const auto& v : rec.violations) {
        char prefix[320];
        std::snprintf(prefix, sizeof prefix,
                      "trial %d (n=%ld m=%ld p=%ld %s l0=%.17g lens=%.17g s2b0=%.17g s2pf=%.17g "
                      "s2r=%.17g seeds=%llu/%llu): ",
                      t, static_cast<long>(c.n), static_cast<long>(c.m), static_cast<long>(c.p),
                      to_string(c.h_variant), c.l0, c.lens, c.sigma2_b0, c.sigma2_pf, c.sigma2_r,
                      static_cast<unsigned long long>(c.seeds.ensemble),
                      static_cast<unsigned long long>(c.seeds.placement));
        report.violations.push_back(prefix + v);
      }
    }
  }
  report.seconds = seconds_since(start);
  return report;
}

}  // namespace hybridvar
