#include <cmath>

#include "hybridvar/experiments.hpp"
#include "hybridvar/hessian.hpp"
#include "hybridvar/solver.hpp"
#include "parallel.hpp"

namespace hybridvar {

namespace {

std::vector<CgRow> solve_point(const SweepContext& ctx, const RhsSpec<double>& spec, double beta,
                               const std::vector<double>& tols) {
  const bool pre = ctx.config.preconditioned;
  std::vector<CgRow> rows(tols.size());
  for (std::size_t t = 0; t < tols.size(); ++t) {
    rows[t].beta = beta;
    rows[t].tol = tols[t];
    rows[t].seed = spec.seed;
  }
  auto fail = [&](const Error& e) {
    for (auto& row : rows) row.status = to_string(e.code());
    return rows;
  };

  const auto b = hybrid_b(ctx.b0, ctx.pf, beta);
  MatrixXd s;
  VectorXd rhs;
  double upper = kInfinity;
  try {
    if (pre) {
      const auto uh = assemble_cvt_factor(ctx.u, ctx.xf.data, beta);
      s = assemble_preconditioned(uh, ctx.k).data;
      rhs = build_rhs_preconditioned(uh, b, ctx.h.matrix, spec);
      upper = bounds_thm5(ctx.l1_b0, ctx.ln_b0, ctx.l1_pf, ctx.l1_k, beta).upper;
    } else {
      s = assemble_unpreconditioned(b, ctx.k).data;
      rhs = build_rhs(b, ctx.h.matrix, spec);
      upper = bounds_thm4(ctx.l1_b0, ctx.ln_b0, ctx.kappa_b0, ctx.l1_pf, ctx.l1_k, beta).upper;
    }
  } catch (const Error& e) {
    return fail(e);
  }
  const double kappa = spectral_summary(s).kappa;
  for (auto& row : rows) {
    row.kappa = kappa;
    row.bound_upper = upper;
    try {
      const auto result = cg_solve(s, rhs, row.tol);
      row.iterations = result.iterations;
      row.converged = result.converged;
      if (!result.converged) row.status = "max_iter";
    } catch (const Error& e) {
      row.status = to_string(e.code());
    }
  }
  return rows;
}

}  // namespace

std::vector<CgRow> cg_sweep(const ExperimentConfig& config, const std::vector<double>& betas,
                            const std::vector<double>& tols) {
  require(!tols.empty(), ErrorCode::InvalidArgument, "need at least one CG tolerance");
  const SweepContext ctx = build_context(config);
  const auto spec = make_rhs_spec<double>(config.n, config.p, config.seeds.rhs);
  std::vector<std::vector<CgRow>> per_beta(betas.size());
  detail::parallel_for(betas.size(), config.threads, [&](std::size_t i) {
    per_beta[i] = solve_point(ctx, spec, betas[i], tols);
  });
  std::vector<CgRow> rows;
  for (auto& block : per_beta) rows.insert(rows.end(), block.begin(), block.end());
  return rows;
}

std::vector<double> cg_beta_grid(bool preconditioned) {
  return preconditioned ? uniform_grid(0.0, 1.0, 20) : uniform_grid(0.0, 0.95, 20);
}

CgStudy run_cg_study(const ExperimentConfig& config, const std::vector<double>& tols) {
  CgStudy out;
  ExperimentConfig unpre = config;
  unpre.preconditioned = false;
  out.unpreconditioned =
      cg_sweep(unpre, unpre.beta_grid.empty() ? cg_beta_grid(false) : unpre.beta_grid, tols);
  ExperimentConfig pre = config;
  pre.preconditioned = true;
  out.preconditioned =
      cg_sweep(pre, pre.beta_grid.empty() ? cg_beta_grid(true) : pre.beta_grid, tols);
  return out;
}

}  // namespace hybridvar
