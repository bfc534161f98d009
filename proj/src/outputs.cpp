#include <cmath>
#include <fstream>

#include "hybridvar/experiments.hpp"
#include "hybridvar/matrix_io.hpp"

namespace hybridvar {

namespace {

const std::vector<std::pair<Theorem, std::string>>& bound_columns(bool preconditioned) {
  static const std::vector<std::pair<Theorem, std::string>> unpre = {
      {Theorem::Lemma2, "lemma2"}, {Theorem::Thm3, "thm3"}, {Theorem::Thm4, "thm4"},
      {Theorem::Coro2, "coro2"}};
  static const std::vector<std::pair<Theorem, std::string>> pre = {{Theorem::Thm5, "thm5"},
                                                                   {Theorem::Thm6, "thm6"}};
  return preconditioned ? pre : unpre;
}

std::vector<std::string> sweep_header(bool preconditioned) {
  std::vector<std::string> h = {"beta", "status", "kappa", "log10_kappa", "lambda_max", "lambda_min"};
  if (!preconditioned) h.insert(h.end(), {"lambda_max_B", "lambda_min_B", "kappa_B"});
  for (const auto& [theorem, name] : bound_columns(preconditioned)) {
    h.insert(h.end(), {name + "_lower", name + "_upper", "log10_" + name + "_lower",
                       "log10_" + name + "_upper"});
  }
  if (preconditioned) h.push_back("switch_beta");
  h.push_back("violations");
  return h;
}

std::vector<std::string> sweep_row(const SweepRecord& r, double switch_beta) {
  const auto f = format_double;
  std::vector<std::string> row = {f(r.beta), r.status, f(r.kappa), f(std::log10(r.kappa)),
                                  f(r.lambda_max), f(r.lambda_min)};
  if (!r.preconditioned) {
    const double nan = std::nan("");
    const auto& b = r.background;
    row.insert(row.end(), {f(b ? b->lambda_max : nan), f(b ? b->lambda_min : nan),
                           f(b ? b->kappa : nan)});
  }
  for (const auto& [theorem, name] : bound_columns(r.preconditioned)) {
    const BoundReport* found = nullptr;
    for (const auto& report : r.bounds)
      if (report.theorem == theorem) found = &report;
    if (found) {
      row.insert(row.end(), {f(found->lower), f(found->upper), f(std::log10(found->lower)),
                             f(std::log10(found->upper))});
    } else {
      row.insert(row.end(), {"nan", "nan", "nan", "nan"});
    }
  }
  if (r.preconditioned) row.push_back(f(switch_beta));
  row.push_back(std::to_string(r.violations.size()));
  return row;
}

}  // namespace

std::string Table::to_csv() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw Error(ErrorCode::InvalidArgument, "no column named '" + name + "'");
}

Table sweep_table(const SweepResult& sweep) {
  Table t;
  t.header = sweep_header(sweep.config.preconditioned);
  for (const auto& r : sweep.records) t.rows.push_back(sweep_row(r, sweep.switch_beta));
  return t;
}

Table family_table(const FamilyResult& family) {
  Table t;
  const bool pre = !family.sweeps.empty() && family.sweeps.front().config.preconditioned;
  t.header = {"family", "value"};
  const auto rest = sweep_header(pre);
  t.header.insert(t.header.end(), rest.begin(), rest.end());
  for (std::size_t v = 0; v < family.sweeps.size(); ++v) {
    for (const auto& r : family.sweeps[v].records) {
      std::vector<std::string> row = {to_string(family.family), format_double(family.values[v])};
      const auto cells = sweep_row(r, family.sweeps[v].switch_beta);
      row.insert(row.end(), cells.begin(), cells.end());
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

Table eigen_curve_table(const EigenCurve& curve) {
  Table t;
  t.header = {"L", "lambda1_B0", "lambda1_Pf_mean", "lambda1_Pf_std"};
  for (auto seed : curve.seeds) t.header.push_back("lambda1_Pf_seed" + std::to_string(seed));
  for (std::size_t l = 0; l < curve.lengths.size(); ++l) {
    std::vector<std::string> row = {format_double(curve.lengths[l]),
                                    format_double(curve.lambda1_b0[l]),
                                    format_double(curve.pf_mean(l)), format_double(curve.pf_std(l))};
    for (double v : curve.lambda1_pf[l]) row.push_back(format_double(v));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table cg_table(const std::vector<CgRow>& rows, bool preconditioned) {
  Table t;
  const std::string bound = preconditioned ? "bound_upper_thm5" : "bound_upper_thm4";
  t.header = {"beta",  "tol",         "iterations", "converged", "kappa", "log10_kappa",
              bound,   "log10_" + bound, "seed",    "status"};
  for (const auto& r : rows) {
    t.rows.push_back({format_double(r.beta), format_double(r.tol), std::to_string(r.iterations),
                      r.converged ? "1" : "0", format_double(r.kappa),
                      format_double(std::log10(r.kappa)), format_double(r.bound_upper),
                      format_double(std::log10(r.bound_upper)), std::to_string(r.seed), r.status});
  }
  return t;
}

nlohmann::json output_metadata(const ExperimentConfig& config, const std::string& panel,
                               const std::vector<std::string>& notes, double wall_seconds) {
  nlohmann::json j;
  j["library_version"] = kLibraryVersion;
  j["figure_id"] = config.figure_id;
  j["panel"] = panel;
  j["config"] = config;
  j["seeds"] = {{"ensemble", config.seeds.ensemble},
                {"placement", config.seeds.placement},
                {"rhs", config.seeds.rhs}};
  j["notes"] = notes;
  j["timing"] = {{"wall_seconds", wall_seconds}};
  return j;
}

void write_output(const std::filesystem::path& dir, const std::string& name, const Table& table,
                  const nlohmann::json& metadata) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  require(!ec, ErrorCode::IoError, "cannot create output directory " + dir.string());
  {
    std::ofstream csv(dir / (name + ".csv"), std::ios::binary);
    require(csv.is_open(), ErrorCode::IoError, "cannot write " + (dir / (name + ".csv")).string());
    csv << table.to_csv();
  }
  std::ofstream meta(dir / (name + ".json"), std::ios::binary);
  require(meta.is_open(), ErrorCode::IoError, "cannot write " + (dir / (name + ".json")).string());
  meta << metadata.dump(2) << '\n';
}

}  // namespace hybridvar
