#include "fairpoly/mechanisms.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace fairpoly::mechanisms {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

void validate_scores(std::span<const double> scores) {
  for (double s : scores) {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw std::invalid_argument("scores must lie in [0,1]");
    }
  }
}

std::vector<geometry::SpatialPoint> to_points(const std::vector<std::vector<double>>& columns) {
  const std::size_t m = columns.empty() ? 0 : columns.front().size();
  std::vector<geometry::SpatialPoint> points(m);
  for (std::size_t i = 0; i < m; ++i) {
    points[i].coords.resize(columns.size());
    for (std::size_t d = 0; d < columns.size(); ++d) points[i].coords[d] = columns[d][i];
  }
  return points;
}

std::vector<double> raw_predictions(const FitReport& report,
                                    const std::vector<std::vector<double>>& columns) {
  if (const auto* uni = std::get_if<polynomial::UnivariatePolynomial>(&report.poly)) {
    return polynomial::eval_univariate_many(*uni, columns[0]);
  }
  return polynomial::eval_separable_many(std::get<polynomial::SeparablePolynomial>(report.poly),
                                         columns);
}

}  // namespace

FitReport fit_distance_fair(const geometry::DtRVector& dtr, std::span<const double> scores,
                            double c, int degree, const solver::SolverConfig& solver_cfg,
                            unsigned audit_threads) {
  require(dtr.size() == scores.size(), "fit_distance_fair: size mismatch");
  require(dtr.size() >= 2, "fit_distance_fair: need at least two rows");
  validate_scores(scores);

  bounds::FairnessConfig config;
  config.c = c;
  config.degree = degree;
  config.dimension = 1;
  config.p = dtr.p;
  config.mode = Mode::kDistance;
  config.validate();

  const auto design = polynomial::build_design_matrix(dtr.distances, degree);
  const auto box = bounds::derive_bounds(config);
  auto solved = solver::bvls_solve(design, scores, box, solver_cfg);

  FitReport report;
  report.poly = polynomial::unpack_univariate(solved.coefficients);
  report.config = config;
  report.solve = std::move(solved.diagnostics);
  report.theorem_variant = box.theorem_variant;
  report.normalization = geometry::AffineTransform::identity(0);
  report.gamma = dtr.gamma;

  const auto raw = polynomial::eval_univariate_many(
      std::get<polynomial::UnivariatePolynomial>(report.poly), dtr.distances);
  report.fair_scores = metrics::clamp_scores(raw);
  report.fit_error = metrics::fitting_error(scores, report.fair_scores);

  const auto data =
      metrics::make_distance_dataset(dtr, std::vector<double>(scores.begin(), scores.end()));
  metrics::AuditOptions audit_opts;
  audit_opts.threads = audit_threads;
  report.audit = metrics::pairwise_audit(data, report.fair_scores, c, audit_opts);
  return report;
}

FitReport fit_zone_fair(std::span<const geometry::SpatialPoint> points,
                        std::span<const double> scores, const bounds::FairnessConfig& config,
                        const solver::SolverConfig& solver_cfg,
                        const geometry::AffineTransform* transform, unsigned audit_threads) {
  config.validate();
  require(config.mode == Mode::kZone, "fit_zone_fair: config mode must be zone");
  require(points.size() == scores.size(), "fit_zone_fair: size mismatch");
  require(points.size() >= 2, "fit_zone_fair: need at least two rows");
  require(!points.empty() && points.front().dim() == static_cast<std::size_t>(config.dimension),
          "fit_zone_fair: point dimension does not match config");
  validate_scores(scores);

  const auto columns = geometry::to_columns(points);
  const auto design = polynomial::build_design_matrix(columns, config.degree);
  const auto box = bounds::derive_bounds(config);
  auto solved = solver::bvls_solve(design, scores, box, solver_cfg);

  FitReport report;
  report.poly = polynomial::unpack_separable(solved.coefficients,
                                             static_cast<std::size_t>(config.dimension),
                                             config.degree);
  report.config = config;
  report.solve = std::move(solved.diagnostics);
  report.theorem_variant = box.theorem_variant;
  report.normalization = transform ? *transform
                                   : geometry::AffineTransform::identity(
                                         static_cast<std::size_t>(config.dimension));
  report.gamma = 1.0;

  const auto raw = polynomial::eval_separable_many(
      std::get<polynomial::SeparablePolynomial>(report.poly), columns);
  report.fair_scores = metrics::clamp_scores(raw);
  report.fit_error = metrics::fitting_error(scores, report.fair_scores);

  const auto data = metrics::make_zone_dataset(
      points, std::vector<double>(scores.begin(), scores.end()), config.p);
  metrics::AuditOptions audit_opts;
  audit_opts.threads = audit_threads;
  report.audit = metrics::pairwise_audit(data, report.fair_scores, config.c, audit_opts);
  return report;
}

FitReport fit_dataset(const metrics::ScoredDataset& data, double c, int degree,
                      const solver::SolverConfig& solver_cfg, unsigned audit_threads) {
  if (data.mode == Mode::kDistance) {
    geometry::DtRVector dtr;
    dtr.distances = data.columns.at(0);
    dtr.gamma = 1.0;
    dtr.p = data.p;
    return fit_distance_fair(dtr, data.scores, c, degree, solver_cfg, audit_threads);
  }
  bounds::FairnessConfig config;
  config.c = c;
  config.degree = degree;
  config.dimension = static_cast<int>(data.dim());
  config.p = data.p;
  config.mode = Mode::kZone;
  const auto points = to_points(data.columns);
  return fit_zone_fair(points, data.scores, config, solver_cfg, nullptr, audit_threads);
}

Predictions predict_distance(const polynomial::UnivariatePolynomial& poly,
                             std::span<const double> dtr_normalized) {
  Predictions out;
  std::vector<double> clipped(dtr_normalized.size());
  for (std::size_t i = 0; i < dtr_normalized.size(); ++i) {
    const double x = dtr_normalized[i];
    if (x < 0.0 || x > 1.0) ++out.clipped_points;
    clipped[i] = std::max(0.0, std::min(1.0, x));
  }
  out.scores = metrics::clamp_scores(polynomial::eval_univariate_many(poly, clipped));
  return out;
}

Predictions predict_zone(const polynomial::SeparablePolynomial& poly,
                         std::span<const geometry::SpatialPoint> normalized_points) {
  Predictions out;
  auto columns = geometry::to_columns(normalized_points);
  require(columns.size() == poly.vars(), "predict_zone: dimension mismatch");
  for (std::size_t i = 0; i < normalized_points.size(); ++i) {
    bool clipped = false;
    for (auto& col : columns) {
      if (col[i] < -1.0 || col[i] > 1.0) {
        clipped = true;
        col[i] = std::max(-1.0, std::min(1.0, col[i]));
      }
    }
    if (clipped) ++out.clipped_points;
  }
  out.scores = metrics::clamp_scores(polynomial::eval_separable_many(poly, columns));
  return out;
}

DegreeSelection select_degree(const metrics::ScoredDataset& data, double c, int degree_min,
                              int degree_max, const solver::SolverConfig& solver_cfg) {
  require(degree_min >= 1 && degree_min <= degree_max, "select_degree: bad degree range");
  const std::size_t m = data.size();

  DegreeSelection selection;
  selection.best_degree = -1;
  double best_value = 0.0;
  for (int n = degree_min; n <= degree_max; ++n) {
    DegreeRow row;
    row.degree = n;
    if (m <= static_cast<std::size_t>(n) + 1) {
      row.skipped = true;
      row.note = "m <= n + 1";
      selection.rows.push_back(std::move(row));
      continue;
    }
    const FitReport report = fit_dataset(data, c, n, solver_cfg);
    const auto raw = raw_predictions(report, data.columns);
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double e = std::fabs(data.scores[i] - raw[i]);
      ss += e * e;
    }
    row.criterion = ss / static_cast<double>(m - n - 1);
    row.fit_error = report.fit_error;
    row.iterations = report.solve.iterations;
    row.converged = report.solve.converged;
    selection.rows.push_back(row);

    // Strictly-better test with a small margin so exact ties keep the
    // smaller degree.
    const double margin = std::max(1e-15, 1e-9 * std::fabs(best_value));
    if (selection.best_degree < 0 || row.criterion < best_value - margin) {
      selection.best_degree = n;
      best_value = row.criterion;
    }
  }
  require(selection.best_degree > 0, "select_degree: every degree in range was skipped");
  return selection;
}

BaselineResult baseline_threshold(const metrics::ScoredDataset& data,
                                  const BaselineParams& params, double c) {
  require(params.threshold >= 0.0 && params.threshold <= 1.0,
          "baseline_threshold: threshold must lie in [0,1]");
  require(std::isfinite(params.alpha) && params.alpha >= 0.0,
          "baseline_threshold: alpha must be >= 0");
  const std::size_t m = data.size();
  require(m >= 2, "baseline_threshold: need at least two rows");

  BaselineResult result;
  if (params.alpha == 0.0) {
    result.adjusted_scores = data.scores;
  } else {
    result.adjusted_scores.resize(m);
    const double root_k = std::sqrt(static_cast<double>(data.dim()));
    for (std::size_t i = 0; i < m; ++i) {
      double target = params.threshold;
      if (data.mode == Mode::kZone) {
        double sum = 0.0;
        for (const auto& col : data.columns) sum += col[i];
        target = std::max(0.0, std::min(1.0, sum / root_k));
      }
      const double delta = target - data.scores[i];
      if (std::fabs(delta) <= params.alpha) {
        result.adjusted_scores[i] = target;  // reaches the target exactly
      } else {
        result.adjusted_scores[i] =
            data.scores[i] + (delta > 0.0 ? params.alpha : -params.alpha);
      }
    }
  }
  result.audit = metrics::pairwise_audit(data, result.adjusted_scores, c);
  result.fit_error = metrics::fitting_error(data.scores, result.adjusted_scores);
  return result;
}

std::vector<SweepRow> sweep_tradeoff(const metrics::ScoredDataset& data,
                                     std::span<const double> c_grid, std::span<const int> n_grid,
                                     const solver::SolverConfig& solver_cfg) {
  require(!c_grid.empty() && !n_grid.empty(), "sweep_tradeoff: empty grid");
  const std::size_t cells = c_grid.size() * n_grid.size();
  std::vector<SweepRow> rows(cells);

  std::atomic<std::size_t> next{0};
  const auto run_cell = [&](std::size_t idx) {
    SweepRow& row = rows[idx];
    row.c = c_grid[idx / n_grid.size()];
    row.degree = n_grid[idx % n_grid.size()];
    try {
      const FitReport report = fit_dataset(data, row.c, row.degree, solver_cfg, 1);
      metrics::AuditOptions one_thread;
      one_thread.threads = 1;
      const auto audit_one = metrics::pairwise_audit(data, report.fair_scores, 1.0, one_thread);
      row.unfairness_at_c = report.audit.unfairness_pct;
      row.unfairness_at_one = audit_one.unfairness_pct;
      row.fit_error = report.fit_error;
      row.solve_time_ms = report.solve.solve_time_ms;
      row.iterations = report.solve.iterations;
      row.final_cost = report.solve.final_objective;
      row.converged = report.solve.converged;
    } catch (const std::exception& e) {
      row.status = e.what();
    }
  };

  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(cells));
  if (workers <= 1) {
    for (std::size_t i = 0; i < cells; ++i) run_cell(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t idx = next.fetch_add(1); idx < cells; idx = next.fetch_add(1)) {
          run_cell(idx);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  return rows;
}

}  // namespace fairpoly::mechanisms
