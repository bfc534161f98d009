#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hybridvar/bounds.hpp"
#include "hybridvar/covariance.hpp"
#include "hybridvar/observation.hpp"
#include "hybridvar/spectral.hpp"

namespace hybridvar {

inline constexpr const char* kLibraryVersion = "0.1.0";

struct SeedSet {
  std::uint64_t ensemble = 1;
  std::uint64_t placement = 2;
  std::uint64_t rhs = 3;
};

/// Every parameter of one experiment. Defaults match the fig1 preset on a
/// 500-point grid.
struct ExperimentConfig {
  Index n = 500;
  Index m = 50;
  Index p = 100;
  double radius = 1.0;
  double l0 = 0.2;
  double lens = 0.05;
  double sigma2_b0 = 1.0;
  double sigma2_pf = 1.0;
  double sigma2_r = 1.0;
  ObservationVariant h_variant = ObservationVariant::RandomPlacement;
  /// Number of observation times after t0; experiments support only 0.
  Index time_levels = 0;
  SeedSet seeds;
  bool preconditioned = false;
  /// Empty selects default_beta_grid(preconditioned).
  std::vector<double> beta_grid;
  std::string figure_id;
  /// Worker threads for sweep points; 0 uses the hardware concurrency.
  unsigned threads = 1;

  void validate() const;
  std::vector<double> betas() const;
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
/// Reads the nested config layout; unknown keys are a ConfigParseError.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

/// `count` evenly spaced points on [lo, hi], endpoints included.
std::vector<double> uniform_grid(double lo, double hi, int count);
/// 50 points on [0, 0.99] unpreconditioned, 51 points on [0, 1] preconditioned.
std::vector<double> default_beta_grid(bool preconditioned);

/// Matrices and extreme eigenvalues shared by every point of a sweep.
struct SweepContext {
  ExperimentConfig config;
  CovarianceMatrix<double> b0;
  EnsembleFactor<double> xf;
  CovarianceMatrix<double> pf;
  ObservationOperator<double> h;
  MatrixXd k;
  MatrixXd u;  // B0^{1/2}; built only when preconditioned
  double l1_b0 = 0, ln_b0 = 0, kappa_b0 = 0, l1_pf = 0, l1_k = 0;
};

SweepContext build_context(const ExperimentConfig& config);

struct SweepRecord {
  double beta = 0;
  bool preconditioned = false;
  /// "ok", or the error code name when the Hessian could not be formed.
  std::string status = "ok";
  double kappa = kInfinity;
  double lambda_max = 0;
  double lambda_min = 0;
  /// Exact spectrum of B (unpreconditioned records only).
  std::optional<SpectralSummary> background;
  std::vector<BoundReport> bounds;
  std::vector<std::string> violations;
  double wall_time = 0;
};

struct SweepResult {
  ExperimentConfig config;
  double l1_b0 = 0, ln_b0 = 0, kappa_b0 = 0, l1_pf = 0, l1_k = 0;
  double switch_beta = 0;
  std::vector<SweepRecord> records;

  std::size_t violation_count() const;
};

/// Evaluates one weight: Lemma 1/2, Thm 3, Thm 4 and (selection H) Coro 2
/// for the unpreconditioned Hessian; Thm 5 and Thm 6 for the CVT Hessian.
/// A numerically singular B gives a kappa = +inf record instead of throwing.
SweepRecord evaluate_point(const SweepContext& ctx, double beta, bool preconditioned);

std::vector<SweepRecord> run_beta_sweep(const SweepContext& ctx, const std::vector<double>& betas,
                                        bool preconditioned, unsigned threads = 1);
SweepResult run_beta_sweep(const ExperimentConfig& config);

enum class ParameterFamily { L0, Lens, SigmaB0, SigmaPf, SigmaR, HVariant, P, M };

const char* to_string(ParameterFamily family);
ParameterFamily parameter_family_from_string(const std::string& name);
/// Copy of `config` with the named parameter set to `value` (variances are
/// variances, HVariant takes 1..4).
ExperimentConfig with_parameter(ExperimentConfig config, ParameterFamily family, double value);

struct FamilyResult {
  ParameterFamily family;
  std::vector<double> values;
  std::vector<SweepResult> sweeps;
};

/// One beta sweep per value, all sharing the seeds of `config`.
FamilyResult run_parameter_family(const ExperimentConfig& config, ParameterFamily family,
                                  const std::vector<double>& values);

struct EigenCurve {
  std::vector<double> lengths;
  std::vector<double> lambda1_b0;
  /// lambda1_pf[l][s]: length index l, seed index s.
  std::vector<std::vector<double>> lambda1_pf;
  std::vector<std::uint64_t> seeds;

  double pf_mean(std::size_t l) const;
  double pf_std(std::size_t l) const;
};

/// l1(sigma2_b0 D_L) and l1(P_f) sampled from sigma2_pf D_L, for each L and
/// for seeds ensemble, ensemble+1, ..., ensemble+seed_count-1.
EigenCurve run_eigen_vs_lengthscale(const ExperimentConfig& config,
                                    const std::vector<double>& lengths, int seed_count = 10);

struct CgRow {
  double beta = 0;
  double tol = 0;
  Index iterations = 0;
  bool converged = false;
  double kappa = kInfinity;
  double bound_upper = kInfinity;
  std::uint64_t seed = 0;
  std::string status = "ok";
};

/// One CG run per (beta, tol) on the configured Hessian. Unpreconditioned
/// systems use b from build_rhs, CVT systems use build_rhs_preconditioned.
/// Per-run failures become the row status.
std::vector<CgRow> cg_sweep(const ExperimentConfig& config, const std::vector<double>& betas,
                            const std::vector<double>& tols);

struct CgStudy {
  std::vector<CgRow> unpreconditioned;
  std::vector<CgRow> preconditioned;
};

/// 20 points on [0, 0.95] unpreconditioned, 20 points on [0, 1] preconditioned.
std::vector<double> cg_beta_grid(bool preconditioned);

/// Both Hessian kinds, over config.beta_grid if set and cg_beta_grid otherwise.
CgStudy run_cg_study(const ExperimentConfig& config, const std::vector<double>& tols);

/// Rectangular text table written as CSV with a header row.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
  /// Index of a named column; throws InvalidArgument if missing.
  std::size_t column(const std::string& name) const;
};

Table sweep_table(const SweepResult& sweep);
Table family_table(const FamilyResult& family);
Table eigen_curve_table(const EigenCurve& curve);
Table cg_table(const std::vector<CgRow>& rows, bool preconditioned);

/// Shared metadata for an output file. Everything except the "timing"
/// object is a pure function of the inputs.
nlohmann::json output_metadata(const ExperimentConfig& config, const std::string& panel,
                               const std::vector<std::string>& notes, double wall_seconds);

/// Writes `<dir>/<name>.csv` and `<dir>/<name>.json`.
void write_output(const std::filesystem::path& dir, const std::string& name, const Table& table,
                  const nlohmann::json& metadata);

/// Named experiment presets.
struct FigurePreset {
  std::string id;
  std::string description;
  ExperimentConfig config;
};

std::vector<std::string> figure_ids();
FigurePreset figure_preset(const std::string& id);

/// Parameter values used for each panel of the family figures (3-6).
std::vector<double> family_values(ParameterFamily family);

/// Runs a preset end to end and returns the names of the CSVs written.
std::vector<std::string> run_figure(const std::string& id, const std::filesystem::path& out_dir,
                                    unsigned threads = 1);

struct ValidationReport {
  int trials = 0;
  long checks = 0;
  std::vector<std::string> violations;
  double seconds = 0;

  bool passed() const { return violations.empty(); }
};

/// Randomized bound-sandwich suite on small grids (n <= 60): every trial
/// draws L0, L_ens, variances, m, p, H variant and beta, then checks
/// Lemma 1, Lemma 2, Thm 3, Thm 4, Coro 2, Thm 5, Thm 6 against exact
/// eigensolves.
ValidationReport run_validation(int trials, std::uint64_t seed);

}  // namespace hybridvar
