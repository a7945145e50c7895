// Acceptance suite: one pass/fail line per criterion, exit code equals the
// number of failures. Run directly or through ctest (-R acceptance).

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fairpoly/bounds.hpp"
#include "fairpoly/geometry.hpp"
#include "fairpoly/mechanisms.hpp"
#include "fairpoly/metrics.hpp"
#include "fairpoly/polynomial.hpp"
#include "fairpoly/solver.hpp"

using namespace fairpoly;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

solver::SolverConfig tight_solver() {
  solver::SolverConfig cfg;
  cfg.max_iterations = 300;
  cfg.tolerance = 1e-10;
  return cfg;
}

struct GuaranteeStats {
  int fits = 0;
  std::uint64_t clamped_violations = 0;
  std::uint64_t raw_violations = 0;
  int kkt_failures = 0;
  int nonlinear_failures = 0;
  double elapsed_ms = 0.0;
  bool ran = false;
};

GuaranteeStats run_guarantee_grid() {
  GuaranteeStats stats;
  const auto start = Clock::now();
  std::mt19937_64 rng(20260810);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  constexpr std::size_t m = 500;
  const std::vector<double> c_grid{1.0, 5.0, 25.0};
  const std::vector<int> n_grid{1, 5, 10, 15};
  const auto cfg = tight_solver();

  const auto check_fit = [&](const mechanisms::FitReport& report,
                             const metrics::ScoredDataset& data,
                             const polynomial::DesignMatrix& design) {
    ++stats.fits;
    stats.clamped_violations += report.audit.violated_pairs;

    std::vector<double> raw;
    if (const auto* uni = std::get_if<polynomial::UnivariatePolynomial>(&report.poly)) {
      raw = polynomial::eval_univariate_many(*uni, data.columns[0]);
      if (!bounds::check_nonlinear_condition(*uni, report.config.c).satisfied) {
        ++stats.nonlinear_failures;
      }
    } else {
      const auto& sep = std::get<polynomial::SeparablePolynomial>(report.poly);
      raw = polynomial::eval_separable_many(sep, data.columns);
    }
    stats.raw_violations +=
        metrics::pairwise_audit(data, raw, report.config.c).violated_pairs;

    std::vector<double> coeffs;
    if (const auto* uni = std::get_if<polynomial::UnivariatePolynomial>(&report.poly)) {
      coeffs = polynomial::pack_coefficients(*uni);
    } else {
      coeffs = polynomial::pack_coefficients(
          std::get<polynomial::SeparablePolynomial>(report.poly));
    }
    const auto box = bounds::derive_bounds(report.config);
    const auto kkt = solver::kkt_check(design, data.scores, coeffs, box);
    if (!kkt.satisfied(1e-6)) ++stats.kkt_failures;
  };

  // Distance-based: uniform DtR values normalized so the maximum is 1.
  geometry::DtRVector dtr;
  dtr.distances.resize(m);
  for (auto& v : dtr.distances) v = unit(rng);
  double gamma = 0.0;
  for (double v : dtr.distances) gamma = std::max(gamma, v);
  for (auto& v : dtr.distances) v /= gamma;
  dtr.gamma = 1.0;
  std::vector<double> scores(m);
  for (auto& s : scores) s = unit(rng);
  const auto distance_data = metrics::make_distance_dataset(dtr, scores);
  for (double c : c_grid) {
    for (int n : n_grid) {
      const auto report = mechanisms::fit_distance_fair(dtr, scores, c, n, cfg);
      const auto design = polynomial::build_design_matrix(dtr.distances, n);
      check_fit(report, distance_data, design);
    }
  }

  // Zone-based: k in {2,3}, p in {1,2,3}.
  for (int k : {2, 3}) {
    for (double p : {1.0, 2.0, 3.0}) {
      std::vector<geometry::SpatialPoint> pts(m);
      for (auto& pt : pts) {
        pt.coords.resize(k);
        for (auto& x : pt.coords) x = coord(rng);
      }
      std::vector<double> zone_scores(m);
      for (auto& s : zone_scores) s = unit(rng);
      const auto zone_data = metrics::make_zone_dataset(pts, zone_scores, p);
      for (double c : c_grid) {
        for (int n : n_grid) {
          bounds::FairnessConfig config;
          config.c = c;
          config.degree = n;
          config.dimension = k;
          config.p = p;
          config.mode = Mode::kZone;
          const auto report = mechanisms::fit_zone_fair(pts, zone_scores, config, cfg);
          const auto design = polynomial::build_design_matrix(zone_data.columns, n);
          check_fit(report, zone_data, design);
        }
      }
    }
  }

  stats.elapsed_ms = ms_since(start);
  stats.ran = true;
  return stats;
}

struct Harness {
  int failures = 0;
  void report(int id, const std::string& label, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", id, label.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++failures;
  }
};

}  // namespace

int main() {
  Harness harness;
  GuaranteeStats grid = run_guarantee_grid();

  // 1. Zero violations from every post-fit exhaustive audit, within budget.
  {
    const bool ok = grid.ran && grid.fits == 84 && grid.clamped_violations == 0 &&
                    grid.elapsed_ms < 60000.0;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "%d fits, %llu violated pairs, %.0f ms (budget 60000)", grid.fits,
                  static_cast<unsigned long long>(grid.clamped_violations), grid.elapsed_ms);
    harness.report(1, "post-fit audits report zero violations", ok, detail);
  }

  // 2. Nonlinear condition on every fitted univariate model, plus the
  // zero-slack identity at the linearized bounds.
  {
    bool identity_ok = true;
    for (int n = 1; n <= 20 && identity_ok; ++n) {
      for (double c : {1.0, 5.0, 25.0}) {
        double weighted = 0.0;
        for (int i = 1; i <= n; ++i) weighted += i * bounds::univariate_bound(i, n, c);
        if (std::fabs(weighted - c) > 1e-9) identity_ok = false;
      }
    }
    const bool ok = grid.nonlinear_failures == 0 && identity_ok;
    char detail[128];
    std::snprintf(detail, sizeof(detail), "%d condition failures, bound identity %s",
                  grid.nonlinear_failures, identity_ok ? "exact" : "broken");
    harness.report(2, "sum of i*|a_i| stays within c", ok, detail);
  }

  // 3. Bound formula spot values.
  {
    bool ok = true;
    for (double c : {1.0, 2.5, 100.0}) {
      bounds::FairnessConfig cfg;
      cfg.c = c;
      cfg.degree = 1;
      cfg.dimension = 2;
      cfg.p = 2.0;
      cfg.mode = Mode::kZone;
      const auto box = bounds::derive_bounds(cfg);
      if (std::fabs(box.upper[1] - c / std::sqrt(2.0)) > 1e-12 * c) ok = false;
      if (std::fabs(box.upper[2] - c / std::sqrt(2.0)) > 1e-12 * c) ok = false;
    }
    for (int n : {1, 2, 5, 20}) {
      for (int i = 1; i <= n; ++i) {
        const double expected = 6.0 * i * 3.0 / (double(n) * (n + 1) * (2 * n + 1));
        if (bounds::univariate_bound(i, n, 3.0) != expected) ok = false;
        for (double p : {1.0, 2.0, 3.5}) {
          if (bounds::separable_bound(i, n, 1, p, 3.0) != bounds::univariate_bound(i, n, 3.0)) {
            ok = false;  // k = 1 reduction must be bit-exact
          }
        }
      }
    }
    harness.report(3, "bound formulas reproduce the closed-form values", ok, "");
  }

  // 4. Worked examples: RMS of the constant-0.5 mapping and the normalized
  // distance of (1,1) with gamma = sqrt(10).
  {
    const std::vector<double> original{0.8, 0.7, 0.3, 0.5};
    const std::vector<double> constant(4, 0.5);
    const double rms = metrics::fitting_error(original, constant);
    const bool rms_ok = std::fabs(rms - 0.206) <= 0.0005;

    const std::vector<geometry::SpatialPoint> pts{{{1.0, 1.0}}, {{3.0, 1.0}}};
    const auto dtr = geometry::compute_dtr(pts, {{0.0, 0.0}}, 2.0);
    const bool dtr_ok =
        std::fabs(dtr.distances[0] - std::sqrt(2.0) / std::sqrt(10.0)) <= 1e-12 &&
        std::fabs(dtr.gamma - std::sqrt(10.0)) <= 1e-12;
    char detail[96];
    std::snprintf(detail, sizeof(detail), "rms=%.6f, dtr=%.12f", rms, dtr.distances[0]);
    harness.report(4, "worked examples reproduce", rms_ok && dtr_ok, detail);
  }

  // 5. Solver oracle equivalence and KKT optimality.
  {
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    bool oracle_ok = true;
    bool recovery_ok = true;
    for (int trial = 0; trial < 20; ++trial) {
      const int degree = 1 + static_cast<int>(rng() % 4);  // at most 5 columns
      std::vector<double> xs(40);
      for (auto& x : xs) x = coord(rng);
      const auto design = polynomial::build_design_matrix(xs, degree);
      std::vector<double> b(40);
      for (auto& v : b) v = unit(rng);

      Eigen::MatrixXd L = Eigen::Map<
          const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          design.data.data(), design.rows, design.cols);
      Eigen::VectorXd bv = Eigen::Map<const Eigen::VectorXd>(b.data(), b.size());
      Eigen::VectorXd ref = (L.transpose() * L).ldlt().solve(L.transpose() * bv);

      bounds::CoefficientBounds wide;
      wide.lower.resize(design.cols);
      wide.upper.resize(design.cols);
      for (std::size_t j = 0; j < design.cols; ++j) {
        const double r = 10.0 * std::max(1.0, std::fabs(ref[j]));
        wide.lower[j] = -r;
        wide.upper[j] = r;
      }
      const auto solved = solver::bvls_solve(design, b, wide, tight_solver());
      for (std::size_t j = 0; j < design.cols; ++j) {
        if (std::fabs(solved.coefficients[j] - ref[j]) >
            1e-6 * (1.0 + std::fabs(ref[j]))) {
          oracle_ok = false;
        }
      }

      // Within-bounds generator at 50% of each bound.
      bounds::CoefficientBounds box;
      box.lower.resize(design.cols);
      box.upper.resize(design.cols);
      std::vector<double> truth(design.cols);
      for (std::size_t j = 0; j < design.cols; ++j) {
        const double r = 0.2 + unit(rng);
        box.lower[j] = -r;
        box.upper[j] = r;
        truth[j] = 0.5 * r;
      }
      const auto synthetic = polynomial::multiply(design, truth);
      const auto recovered = solver::bvls_solve(design, synthetic, box, tight_solver());
      for (std::size_t j = 0; j < design.cols; ++j) {
        if (std::fabs(recovered.coefficients[j] - truth[j]) > 1e-6) recovery_ok = false;
      }
    }
    const bool ok = oracle_ok && recovery_ok && grid.kkt_failures == 0;
    char detail[128];
    std::snprintf(detail, sizeof(detail),
                  "normal-equations match %s, recovery %s, %d KKT failures",
                  oracle_ok ? "yes" : "no", recovery_ok ? "yes" : "no", grid.kkt_failures);
    harness.report(5, "solver matches its oracles and satisfies KKT", ok, detail);
  }

  // 6. Monotone trade-off trends.
  {
    std::mt19937_64 rng(66);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t m = 300;

    // Generic dataset: fitting error non-increasing in c at fixed n.
    geometry::DtRVector dtr;
    dtr.distances.resize(m);
    for (auto& v : dtr.distances) v = unit(rng);
    dtr.gamma = 1.0;
    std::vector<double> scores(m);
    for (auto& s : scores) s = unit(rng);
    bool error_ok = true;
    double prev_err = std::numeric_limits<double>::infinity();
    for (double c : {1.0, 2.0, 4.0, 8.0, 16.0}) {
      const auto report = mechanisms::fit_distance_fair(dtr, scores, c, 5, tight_solver());
      if (report.fit_error > prev_err + 1e-6) error_ok = false;
      prev_err = report.fit_error;
    }

    // Steep linear dataset with no clamping: audit-at-1 unfairness is 0 at
    // c = 1 and non-decreasing in c.
    geometry::DtRVector steep;
    steep.distances.resize(m);
    for (std::size_t i = 0; i < m; ++i) steep.distances[i] = 0.25 + 0.5 * unit(rng);
    steep.gamma = 1.0;
    std::vector<double> steep_scores(m);
    for (std::size_t i = 0; i < m; ++i) steep_scores[i] = 2.0 * steep.distances[i] - 0.5;
    const auto steep_data = metrics::make_distance_dataset(steep, steep_scores);
    bool unfair_ok = true;
    double prev_unfair = -1.0;
    for (double c : {1.0, 1.25, 1.5, 2.0, 25.0}) {
      const auto report = mechanisms::fit_distance_fair(steep, steep_scores, c, 1,
                                                        tight_solver());
      const auto at_one = metrics::pairwise_audit(steep_data, report.fair_scores, 1.0);
      if (c == 1.0 && at_one.violated_pairs != 0) unfair_ok = false;
      if (at_one.unfairness_pct < prev_unfair - 1e-12) unfair_ok = false;
      prev_unfair = at_one.unfairness_pct;
    }
    harness.report(6, "fitting error falls and unfairness grows with c", error_ok && unfair_ok,
                   error_ok ? (unfair_ok ? "" : "unfairness trend broken")
                            : "error trend broken");
  }

  // 7. Threshold baseline behavior.
  {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t m = 200;
    geometry::DtRVector dtr;
    dtr.distances.resize(m);
    for (auto& v : dtr.distances) v = unit(rng);
    dtr.gamma = 1.0;
    std::vector<double> scores(m);
    for (auto& s : scores) s = unit(rng);
    const auto data = metrics::make_distance_dataset(dtr, scores);
    const auto original_audit = metrics::pairwise_audit(data, scores, 1.0);

    mechanisms::BaselineParams params;
    params.threshold = 0.5;
    params.alpha = 0.0;
    const auto zero = mechanisms::baseline_threshold(data, params, 1.0);
    const bool zero_ok = zero.adjusted_scores == scores &&
                         zero.audit.violated_pairs == original_audit.violated_pairs;

    params.alpha = 1.0;
    const auto full = mechanisms::baseline_threshold(data, params, 1.0);
    bool full_ok = full.audit.violated_pairs == 0;
    for (double s : full.adjusted_scores) full_ok = full_ok && s == 0.5;

    bool monotone_ok = true;
    std::uint64_t prev = ~0ull;
    for (double alpha : {0.0, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 1.0}) {
      params.alpha = alpha;
      const auto step = mechanisms::baseline_threshold(data, params, 1.0);
      if (step.audit.violated_pairs > prev) monotone_ok = false;
      prev = step.audit.violated_pairs;
    }
    harness.report(7, "baseline: identity at alpha 0, saturation, monotone unfairness",
                   zero_ok && full_ok && monotone_ok, "");
  }

  // 8. Clamping introduced no violation anywhere in the criterion-1 grid.
  {
    char detail[128];
    std::snprintf(detail, sizeof(detail),
                  "raw-prediction violations %llu, clamped violations %llu",
                  static_cast<unsigned long long>(grid.raw_violations),
                  static_cast<unsigned long long>(grid.clamped_violations));
    harness.report(8, "clamping never adds audit violations",
                   grid.raw_violations == 0 && grid.clamped_violations == 0, detail);
  }

  // 9. Generalized Titu inequality, 10000 random instances.
  {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> pos(1e-9, 10.0);
    std::uint64_t counterexamples = 0;
    for (int trial = 0; trial < 10000; ++trial) {
      const int exponent = 2 + static_cast<int>(rng() % 3);
      const std::size_t len = 2 + rng() % 9;
      double lhs_sum = 0.0, a_sum = 0.0, x_sum = 0.0;
      for (std::size_t i = 0; i < len; ++i) {
        const double a = pos(rng);
        const double x = pos(rng);
        lhs_sum += std::pow(a, double(exponent)) / x;
        a_sum += a;
        x_sum += x;
      }
      const double lhs = std::pow(double(len), double(exponent - 2)) * lhs_sum;
      const double rhs = std::pow(a_sum, double(exponent)) / x_sum;
      if (lhs < rhs * (1.0 - 1e-12)) ++counterexamples;
    }
    char detail[64];
    std::snprintf(detail, sizeof(detail), "%llu counterexamples",
                  static_cast<unsigned long long>(counterexamples));
    harness.report(9, "generalized Titu inequality holds", counterexamples == 0, detail);
  }

  // 10. Performance sanity, single-threaded.
  {
    std::mt19937_64 rng(1010);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    geometry::DtRVector big;
    big.distances.resize(10000);
    for (auto& v : big.distances) v = unit(rng);
    big.gamma = 1.0;
    std::vector<double> big_scores(10000);
    for (auto& s : big_scores) s = unit(rng);
    const auto fit_start = Clock::now();
    const auto report = mechanisms::fit_distance_fair(big, big_scores, 5.0, 20,
                                                      tight_solver(), 1);
    const double fit_ms = ms_since(fit_start);

    geometry::DtRVector mid;
    mid.distances.assign(big.distances.begin(), big.distances.begin() + 2000);
    mid.gamma = 1.0;
    const std::vector<double> mid_scores(big_scores.begin(), big_scores.begin() + 2000);
    const auto mid_data = metrics::make_distance_dataset(mid, mid_scores);
    metrics::AuditOptions one_thread;
    one_thread.threads = 1;
    const auto audit_start = Clock::now();
    const auto audit = metrics::pairwise_audit(mid_data, mid_scores, 1.0, one_thread);
    const double audit_ms = ms_since(audit_start);

    const bool ok = fit_ms < 5000.0 && audit_ms < 10000.0 &&
                    report.audit.violated_pairs == 0 && audit.total_pairs == 1999000ull;
    char detail[128];
    std::snprintf(detail, sizeof(detail), "fit %.0f ms (budget 5000), audit %.0f ms (budget "
                  "10000)", fit_ms, audit_ms);
    harness.report(10, "performance sanity", ok, detail);
  }

  if (harness.failures == 0) {
    std::printf("acceptance: all 10 criteria passed\n");
  } else {
    std::printf("acceptance: %d criteria FAILED\n", harness.failures);
  }
  return harness.failures;
}
