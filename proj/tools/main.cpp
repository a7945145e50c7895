#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "fairpoly/io.hpp"
#include "fairpoly/kernels.hpp"
#include "fairpoly/mechanisms.hpp"
#include "fairpoly/metrics.hpp"
#include "fairpoly/solver.hpp"

namespace {

using namespace fairpoly;

struct CommonArgs {
  std::string input;
  std::string mode_text = "distance";
  std::string delimiter = ",";
  bool skip_bad = false;
  std::vector<double> reference;
  double p = 2.0;
};

struct SolverArgs {
  int max_iterations = 300;
  double tolerance = 1e-2;
  bool random_start = false;
};

struct FitArgs {
  double c = 1.0;
  int degree = 5;
  std::string model_out;
  std::string scores_out;
  std::string report_out;
};

struct AuditArgs {
  double c = 1.0;
  std::string model_in;
  std::string report_out;
  std::optional<std::uint64_t> sample_pairs;
  unsigned threads = 0;
};

struct BaselineArgs {
  double c = 1.0;
  double alpha = 0.0;
  double threshold = 0.5;
  std::string scores_out;
  std::string report_out;
};

struct SweepArgs {
  std::vector<double> c_grid;
  std::string n_grid_text;
  std::string report_out;
};

struct SelectArgs {
  double c = 1.0;
  std::string n_grid_text;
  std::string report_out;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--input", args.input, "delimited input file")->required();
  cmd->add_option("--mode", args.mode_text, "fairness mode: distance or zone")
      ->check(CLI::IsMember({"distance", "zone"}))
      ->required();
  cmd->add_option("--delimiter", args.delimiter, "field delimiter (default ',')");
  cmd->add_flag("--skip-bad", args.skip_bad, "skip malformed rows instead of aborting");
  cmd->add_option("--reference", args.reference,
                  "reference point coordinates (distance mode; computes DtR from x columns)")
      ->delimiter(',');
  cmd->add_option("--p", args.p, "norm order for spatial distances (>= 1)");
}

void add_solver(CLI::App* cmd, SolverArgs& args) {
  cmd->add_option("--max-iterations", args.max_iterations, "solver iteration cap");
  cmd->add_option("--tolerance", args.tolerance, "relative objective-change stop threshold");
  cmd->add_flag("--random-start", args.random_start,
                "start the solver from a random feasible point (uses --seed)");
}

io::IngestOptions ingest_options(const CommonArgs& args) {
  io::IngestOptions opts;
  opts.mode = parse_mode(args.mode_text);
  if (args.delimiter.size() != 1) {
    throw io::DataError("--delimiter must be a single character");
  }
  opts.delimiter = args.delimiter[0];
  opts.skip_bad = args.skip_bad;
  if (!args.reference.empty()) opts.reference = args.reference;
  opts.p = args.p;
  return opts;
}

io::IngestResult run_ingest(const CommonArgs& args) {
  auto result = io::ingest(args.input, ingest_options(args));
  for (const auto& warning : result.warnings) std::cerr << "warning: " << warning << "\n";
  std::cerr << "ingested " << result.rows_read << " rows from '" << args.input << "'";
  if (result.rows_rejected > 0) std::cerr << " (" << result.rows_rejected << " rejected)";
  std::cerr << "\n";
  return result;
}

solver::SolverConfig solver_config(const SolverArgs& args,
                                   const std::optional<std::uint64_t>& seed) {
  solver::SolverConfig cfg;
  cfg.max_iterations = args.max_iterations;
  cfg.tolerance = args.tolerance;
  if (args.random_start) {
    if (!seed) throw io::DataError("--random-start requires --seed");
    cfg.seed = seed;
  }
  return cfg;
}

std::vector<int> parse_degree_grid(const std::string& text) {
  std::vector<int> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    if (lo < 1 || hi < lo) throw io::DataError("--n-grid range must satisfy 1 <= lo <= hi");
    for (int n = lo; n <= hi; ++n) out.push_back(n);
    return out;
  }
  std::string token;
  std::istringstream ss(text);
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    out.push_back(std::stoi(token));
  }
  if (out.empty()) throw io::DataError("--n-grid is empty");
  return out;
}

int run_fit(const CommonArgs& common, const FitArgs& fit, const SolverArgs& solver_args,
            const std::optional<std::uint64_t>& seed) {
  const auto ing = run_ingest(common);
  const auto cfg = solver_config(solver_args, seed);

  auto report = mechanisms::fit_dataset(ing.dataset, fit.c, fit.degree, cfg);
  report.normalization = ing.transform;
  report.gamma = ing.gamma;
  if (report.solve.underdetermined) {
    std::cerr << "warning: fewer rows than coefficients; fit is underdetermined\n";
  }

  if (!fit.model_out.empty()) {
    const auto model = io::make_model(report, ing.input_digest, io::make_timestamp(), cfg);
    io::save_model(fit.model_out, model);
  }
  if (!fit.scores_out.empty()) {
    io::write_scores(fit.scores_out, ing.ids, ing.dataset.scores, report.fair_scores);
  }
  if (!fit.report_out.empty()) {
    io::write_fit_report(fit.report_out, report, ing.rows_read);
  }

  std::cout << "fit: mode=" << to_string(report.config.mode) << " c=" << io::format_g9(fit.c)
            << " n=" << fit.degree << " variant=" << report.theorem_variant
            << " fitting_error=" << io::format_g9(report.fit_error)
            << " unfairness_pct=" << io::format_g9(report.audit.unfairness_pct)
            << " iterations=" << report.solve.iterations
            << " converged=" << (report.solve.converged ? 1 : 0) << "\n";
  return report.solve.converged ? 0 : 3;
}

int run_audit(const CommonArgs& common, const AuditArgs& audit,
              const std::optional<std::uint64_t>& seed) {
  const auto ing = run_ingest(common);
  metrics::AuditOptions opts;
  opts.sample_pairs = audit.sample_pairs;
  opts.seed = seed;
  opts.threads = audit.threads;
  if (opts.sample_pairs && !seed) throw io::DataError("--sample-pairs requires --seed");

  metrics::AuditReport result;
  const Mode mode = parse_mode(common.mode_text);
  if (!audit.model_in.empty()) {
    const auto model = io::load_model(audit.model_in);
    if (model.mode != mode) {
      throw io::DataError("model mode does not match --mode");
    }
    std::size_t clipped = 0;
    if (mode == Mode::kDistance) {
      // Raw distances, normalized by the model's gamma and clipped into [0,1].
      std::vector<double> raw;
      if (ing.raw_columns.size() == 1 && !ing.transform.dim()) {
        raw = ing.raw_columns[0];
      } else {
        raw.resize(ing.rows_read);
        geometry::SpatialPoint ref{common.reference};
        for (std::size_t i = 0; i < ing.rows_read; ++i) {
          geometry::SpatialPoint pt;
          pt.coords.resize(ing.raw_columns.size());
          for (std::size_t d = 0; d < ing.raw_columns.size(); ++d) {
            pt.coords[d] = ing.raw_columns[d][i];
          }
          raw[i] = geometry::minkowski_distance(pt, ref, model.p);
        }
      }
      std::vector<double> normalized(raw.size());
      for (std::size_t i = 0; i < raw.size(); ++i) {
        const double v = raw[i] / model.gamma;
        if (v < 0.0 || v > 1.0) ++clipped;
        normalized[i] = std::max(0.0, std::min(1.0, v));
      }
      const auto& poly = std::get<polynomial::UnivariatePolynomial>(model.poly);
      const auto preds = mechanisms::predict_distance(poly, normalized);
      metrics::ScoredDataset data;
      data.mode = Mode::kDistance;
      data.columns = {normalized};
      data.scores = preds.scores;
      data.p = model.p;
      result = metrics::pairwise_audit(data, preds.scores, audit.c, opts);
    } else {
      if (ing.raw_columns.size() != static_cast<std::size_t>(model.k)) {
        throw io::DataError("model dimension does not match input columns");
      }
      std::vector<geometry::SpatialPoint> pts(ing.rows_read);
      for (std::size_t i = 0; i < ing.rows_read; ++i) {
        pts[i].coords.resize(model.k);
        bool was_clipped = false;
        for (int d = 0; d < model.k; ++d) {
          double v = model.transform.to_normalized(ing.raw_columns[d][i], d);
          if (v < -1.0 || v > 1.0) {
            was_clipped = true;
            v = std::max(-1.0, std::min(1.0, v));
          }
          pts[i].coords[d] = v;
        }
        if (was_clipped) ++clipped;
      }
      const auto& poly = std::get<polynomial::SeparablePolynomial>(model.poly);
      const auto preds = mechanisms::predict_zone(poly, pts);
      auto data = metrics::make_zone_dataset(pts, preds.scores, model.p);
      result = metrics::pairwise_audit(data, preds.scores, audit.c, opts);
    }
    if (clipped > 0) {
      std::cerr << "warning: " << clipped
                << " query points fell outside the model's normalization box and were "
                   "clipped\n";
    }
  } else {
    result = metrics::pairwise_audit(ing.dataset, ing.dataset.scores, audit.c, opts);
  }

  if (!audit.report_out.empty()) {
    io::write_audit_report(audit.report_out, result, mode);
  }
  std::cout << "audit: c=" << io::format_g9(result.c_used) << " pairs=" << result.total_pairs
            << " violated=" << result.violated_pairs
            << " unfairness_pct=" << io::format_g9(result.unfairness_pct)
            << " max_violation=" << io::format_g9(result.max_violation)
            << " sampled=" << (result.sampled ? 1 : 0) << "\n";
  return 0;
}

int run_baseline(const CommonArgs& common, const BaselineArgs& baseline) {
  const auto ing = run_ingest(common);
  mechanisms::BaselineParams params;
  params.threshold = baseline.threshold;
  params.alpha = baseline.alpha;
  const auto result = mechanisms::baseline_threshold(ing.dataset, params, baseline.c);

  if (!baseline.scores_out.empty()) {
    io::write_scores(baseline.scores_out, ing.ids, ing.dataset.scores, result.adjusted_scores);
  }
  if (!baseline.report_out.empty()) {
    io::write_baseline_report(baseline.report_out, result, params,
                              parse_mode(common.mode_text), baseline.c);
  }
  std::cout << "baseline: alpha=" << io::format_g9(params.alpha)
            << " threshold=" << io::format_g9(params.threshold)
            << " fitting_error=" << io::format_g9(result.fit_error)
            << " unfairness_pct=" << io::format_g9(result.audit.unfairness_pct) << "\n";
  return 0;
}

int run_sweep(const CommonArgs& common, const SweepArgs& sweep, const SolverArgs& solver_args,
              const std::optional<std::uint64_t>& seed) {
  const auto ing = run_ingest(common);
  const auto cfg = solver_config(solver_args, seed);
  const auto degrees = parse_degree_grid(sweep.n_grid_text);

  const auto rows = mechanisms::sweep_tradeoff(ing.dataset, sweep.c_grid, degrees, cfg);
  io::write_sweep_table(sweep.report_out, rows);

  bool all_converged = true;
  for (const auto& row : rows) {
    if (row.status != "ok") {
      std::cerr << "warning: cell c=" << row.c << " n=" << row.degree << " failed: "
                << row.status << "\n";
    } else if (!row.converged) {
      all_converged = false;
    }
  }
  std::cout << "sweep: " << rows.size() << " cells written to " << sweep.report_out << "\n";
  return all_converged ? 0 : 3;
}

int run_select_degree(const CommonArgs& common, const SelectArgs& select,
                      const SolverArgs& solver_args, const std::optional<std::uint64_t>& seed) {
  const auto ing = run_ingest(common);
  const auto cfg = solver_config(solver_args, seed);
  const auto degrees = parse_degree_grid(select.n_grid_text);
  const auto [lo, hi] = std::minmax_element(degrees.begin(), degrees.end());

  const auto selection = mechanisms::select_degree(ing.dataset, select.c, *lo, *hi, cfg);
  if (!select.report_out.empty()) {
    io::write_degree_table(select.report_out, selection);
  }
  for (const auto& row : selection.rows) {
    if (row.skipped) {
      std::cerr << "warning: degree " << row.degree << " skipped: " << row.note << "\n";
    }
  }
  std::cout << "selected degree: " << selection.best_degree << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"c-fair polynomial fitting, auditing, and benchmarking for spatial "
               "likelihood scores"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;

  CommonArgs fit_common, audit_common, baseline_common, sweep_common, select_common;
  FitArgs fit_args;
  AuditArgs audit_args;
  BaselineArgs baseline_args;
  SweepArgs sweep_args;
  SelectArgs select_args;
  SolverArgs fit_solver, sweep_solver, select_solver;

  auto* fit = app.add_subcommand("fit", "fit a c-fair polynomial and emit fair scores");
  add_common(fit, fit_common);
  add_solver(fit, fit_solver);
  fit->add_option("--c", fit_args.c, "fairness constant (>= 1)");
  fit->add_option("--degree", fit_args.degree, "polynomial degree n");
  fit->add_option("--model-out", fit_args.model_out, "write the fitted model here");
  fit->add_option("--scores-out", fit_args.scores_out, "write id,original_score,fair_score");
  fit->add_option("--report-out", fit_args.report_out, "write the fit report table");

  auto* audit = app.add_subcommand("audit", "audit pairwise fairness constraints");
  add_common(audit, audit_common);
  audit->add_option("--c", audit_args.c, "fairness level to audit at (>= 1)");
  audit->add_option("--model-in", audit_args.model_in,
                    "audit this model's predictions instead of the input scores");
  audit->add_option("--report-out", audit_args.report_out, "write the audit report");
  audit->add_option("--sample-pairs", audit_args.sample_pairs,
                    "sample this many pairs instead of the exhaustive audit");
  audit->add_option("--threads", audit_args.threads, "audit worker threads (0 = auto)");

  auto* baseline = app.add_subcommand("baseline", "threshold benchmark mechanism");
  add_common(baseline, baseline_common);
  baseline->add_option("--c", baseline_args.c, "fairness level to audit at (>= 1)");
  baseline->add_option("--alpha", baseline_args.alpha, "maximum score alteration");
  baseline->add_option("--threshold", baseline_args.threshold,
                       "target score t (distance mode)");
  baseline->add_option("--scores-out", baseline_args.scores_out, "write adjusted scores");
  baseline->add_option("--report-out", baseline_args.report_out, "write the baseline report");

  auto* sweep = app.add_subcommand("sweep", "fairness-utility trade-off grid");
  add_common(sweep, sweep_common);
  add_solver(sweep, sweep_solver);
  sweep->add_option("--c-grid", sweep_args.c_grid, "comma-separated c values")
      ->delimiter(',')
      ->required();
  sweep->add_option("--n-grid", sweep_args.n_grid_text,
                    "degrees: comma-separated list or lo..hi range")
      ->required();
  sweep->add_option("--report-out", sweep_args.report_out, "write the sweep table")->required();

  auto* select = app.add_subcommand("select-degree", "pick the degree minimizing the "
                                                     "residual variance");
  add_common(select, select_common);
  add_solver(select, select_solver);
  select->add_option("--c", select_args.c, "fairness constant (>= 1)");
  select->add_option("--n-grid", select_args.n_grid_text, "degree range lo..hi")->required();
  select->add_option("--report-out", select_args.report_out, "write the per-degree table");

  app.add_option("--seed", seed,
                 "seed for sampled audits and opt-in random solver starts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (fit->parsed()) return run_fit(fit_common, fit_args, fit_solver, seed);
    if (audit->parsed()) return run_audit(audit_common, audit_args, seed);
    if (baseline->parsed()) return run_baseline(baseline_common, baseline_args);
    if (sweep->parsed()) return run_sweep(sweep_common, sweep_args, sweep_solver, seed);
    if (select->parsed()) {
      return run_select_degree(select_common, select_args, select_solver, seed);
    }
  } catch (const fairpoly::io::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
