#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fairpoly/bounds.hpp"
#include "fairpoly/geometry.hpp"
#include "fairpoly/metrics.hpp"
#include "fairpoly/polynomial.hpp"
#include "fairpoly/solver.hpp"

namespace fairpoly::mechanisms {

using FairPolynomial =
    std::variant<polynomial::UnivariatePolynomial, polynomial::SeparablePolynomial>;

struct FitReport {
  FairPolynomial poly;
  bounds::FairnessConfig config;
  double fit_error = 0.0;  // RMS between original and fair scores
  solver::SolveDiagnostics solve;
  metrics::AuditReport audit;  // post-fit exhaustive audit at level c: 0 violations
  std::string theorem_variant;
  geometry::AffineTransform normalization;  // zone mode; empty for distance mode
  double gamma = 1.0;                       // DtR normalizer (distance mode)
  std::vector<double> fair_scores;          // clamped predictions on the training rows
};

/// Fit a c-fair univariate polynomial to scores over normalized DtR values,
/// clamp predictions into [0,1], and audit the result at level c.
FitReport fit_distance_fair(const geometry::DtRVector& dtr, std::span<const double> scores,
                            double c, int degree, const solver::SolverConfig& solver_cfg = {},
                            unsigned audit_threads = 0);

/// Fit a c-fair separable polynomial to scores over coordinates normalized
/// into [-1,1]^k; the similarity distance is the p-norm from the config.
FitReport fit_zone_fair(std::span<const geometry::SpatialPoint> points,
                        std::span<const double> scores, const bounds::FairnessConfig& config,
                        const solver::SolverConfig& solver_cfg = {},
                        const geometry::AffineTransform* transform = nullptr,
                        unsigned audit_threads = 0);

/// Mode dispatch over a ScoredDataset (columns already normalized).
FitReport fit_dataset(const metrics::ScoredDataset& data, double c, int degree,
                      const solver::SolverConfig& solver_cfg = {}, unsigned audit_threads = 0);

/// Polynomial evaluation on query inputs. Inputs outside the normalized
/// domain are clipped into it (counted per call) so the fairness guarantee
/// still holds; outputs are clamped into [0,1].
struct Predictions {
  std::vector<double> scores;
  std::size_t clipped_points = 0;
};
Predictions predict_distance(const polynomial::UnivariatePolynomial& poly,
                             std::span<const double> dtr_normalized);
Predictions predict_zone(const polynomial::SeparablePolynomial& poly,
                         std::span<const geometry::SpatialPoint> normalized_points);

struct DegreeRow {
  int degree = 0;
  bool skipped = false;
  std::string note;
  double criterion = 0.0;  // sum of squared residuals / (m - n - 1)
  double fit_error = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct DegreeSelection {
  int best_degree = 0;
  std::vector<DegreeRow> rows;
};

/// Fits every degree in [degree_min, degree_max] and picks the one with the
/// minimum residual variance; ties break toward the smaller degree. Degrees
/// with m <= n + 1 are skipped with a note.
DegreeSelection select_degree(const metrics::ScoredDataset& data, double c, int degree_min,
                              int degree_max, const solver::SolverConfig& solver_cfg = {});

struct BaselineParams {
  double threshold = 0.5;  // distance-based target score t
  double alpha = 0.0;      // maximum allowed score alteration
};

struct BaselineResult {
  std::vector<double> adjusted_scores;
  metrics::AuditReport audit;
  double fit_error = 0.0;
};

/// Threshold benchmark: push each score toward its target by at most alpha
/// without overshooting. Distance mode targets the constant t; zone mode
/// targets clamp01(sum_i x_i / sqrt(k)).
BaselineResult baseline_threshold(const metrics::ScoredDataset& data,
                                  const BaselineParams& params, double c);

struct SweepRow {
  double c = 0.0;
  int degree = 0;
  double unfairness_at_c = 0.0;
  double unfairness_at_one = 0.0;
  double fit_error = 0.0;
  double solve_time_ms = 0.0;
  int iterations = 0;
  double final_cost = 0.0;
  bool converged = false;
  std::string status = "ok";  // per-cell error text; the sweep itself continues
};

/// One fit per (c, n) grid cell, run concurrently over immutable inputs;
/// rows are ordered by grid index regardless of completion order.
std::vector<SweepRow> sweep_tradeoff(const metrics::ScoredDataset& data,
                                     std::span<const double> c_grid, std::span<const int> n_grid,
                                     const solver::SolverConfig& solver_cfg = {});

}  // namespace fairpoly::mechanisms
