#include "fairpoly/solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace fairpoly::solver {

namespace {

enum class Status { kFree, kLower, kUpper };

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace

void SolverConfig::validate() const {
  require(max_iterations >= 1, "SolverConfig: max_iterations must be >= 1");
  require(std::isfinite(tolerance) && tolerance > 0.0, "SolverConfig: tolerance must be > 0");
}

BvlsResult bvls_solve(const polynomial::DesignMatrix& matrix, std::span<const double> b,
                      const bounds::CoefficientBounds& box, const SolverConfig& config) {
  config.validate();
  const std::size_t m = matrix.rows;
  const std::size_t q = matrix.cols;
  require(m >= 1 && q >= 1, "bvls_solve: empty problem");
  require(b.size() == m, "bvls_solve: rhs length mismatch");
  require(box.lower.size() == q && box.upper.size() == q, "bvls_solve: bounds misaligned");
  for (double v : matrix.data) require(std::isfinite(v), "bvls_solve: non-finite matrix entry");
  for (double v : b) require(std::isfinite(v), "bvls_solve: non-finite rhs entry");
  for (std::size_t j = 0; j < q; ++j) {
    require(!std::isnan(box.lower[j]) && !std::isnan(box.upper[j]),
            "bvls_solve: NaN bound");
    require(box.lower[j] <= box.upper[j], "bvls_solve: crossed bounds");
  }

  Eigen::MatrixXd L =
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          matrix.data.data(), static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(q));
  Eigen::VectorXd rhs_full = Eigen::Map<const Eigen::VectorXd>(b.data(),
                                                               static_cast<Eigen::Index>(m));

  const auto t_start = std::chrono::steady_clock::now();
  BvlsResult result;
  SolveDiagnostics& diag = result.diagnostics;
  diag.underdetermined = m < q;

  Eigen::VectorXd a = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(q));
  std::vector<Status> status(q, Status::kFree);

  if (config.seed) {
    std::mt19937_64 rng(*config.seed);
    for (std::size_t j = 0; j < q; ++j) {
      double lo = std::max(box.lower[j], -1.0);
      double hi = std::min(box.upper[j], 1.0);
      if (lo > hi) {
        lo = box.lower[j];
        hi = box.upper[j];
      }
      a[static_cast<Eigen::Index>(j)] =
          std::uniform_real_distribution<double>(lo, hi)(rng);
    }
  }

  const auto objective = [&]() { return (L * a - rhs_full).norm(); };
  const double kkt_tol = 1e-11 * (1.0 + (L.transpose() * rhs_full).lpNorm<Eigen::Infinity>());

  double obj = objective();
  diag.objective_trace.push_back(obj);

  // Least-squares over the free columns with bound columns held fixed.
  const auto solve_free = [&](const std::vector<int>& free_idx,
                              bool& rank_deficient) -> Eigen::VectorXd {
    Eigen::MatrixXd sub(static_cast<Eigen::Index>(m),
                        static_cast<Eigen::Index>(free_idx.size()));
    for (std::size_t t = 0; t < free_idx.size(); ++t) {
      sub.col(static_cast<Eigen::Index>(t)) = L.col(free_idx[t]);
    }
    Eigen::VectorXd rhs = rhs_full;
    for (std::size_t j = 0; j < q; ++j) {
      if (status[j] != Status::kFree) {
        rhs -= a[static_cast<Eigen::Index>(j)] * L.col(static_cast<Eigen::Index>(j));
      }
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(sub);
    if (cod.rank() < static_cast<Eigen::Index>(free_idx.size())) rank_deficient = true;
    return cod.solve(rhs);
  };

  const auto collect_free = [&]() {
    std::vector<int> free_idx;
    for (std::size_t j = 0; j < q; ++j) {
      if (status[j] == Status::kFree) free_idx.push_back(static_cast<int>(j));
    }
    return free_idx;
  };

  bool converged = false;
  int iter = 0;
  while (iter < config.max_iterations) {
    ++iter;
    const std::vector<int> free_idx = collect_free();
    bool pinned_this_iter = false;

    if (!free_idx.empty()) {
      const Eigen::VectorXd z = solve_free(free_idx, diag.rank_deficient);
      double alpha = 1.0;
      bool feasible = true;
      for (std::size_t t = 0; t < free_idx.size(); ++t) {
        const int j = free_idx[t];
        const double zj = z[static_cast<Eigen::Index>(t)];
        const double aj = a[j];
        double bound;
        if (zj < box.lower[j]) {
          bound = box.lower[j];
        } else if (zj > box.upper[j]) {
          bound = box.upper[j];
        } else {
          continue;
        }
        feasible = false;
        const double denom = zj - aj;
        const double step = denom != 0.0 ? (bound - aj) / denom : 0.0;
        alpha = std::min(alpha, std::max(step, 0.0));
      }
      if (feasible) {
        for (std::size_t t = 0; t < free_idx.size(); ++t) {
          a[free_idx[t]] = z[static_cast<Eigen::Index>(t)];
        }
      } else {
        for (std::size_t t = 0; t < free_idx.size(); ++t) {
          const int j = free_idx[t];
          double v = a[j] + alpha * (z[static_cast<Eigen::Index>(t)] - a[j]);
          if (v <= box.lower[j]) {
            a[j] = box.lower[j];
            status[static_cast<std::size_t>(j)] = Status::kLower;
          } else if (v >= box.upper[j]) {
            a[j] = box.upper[j];
            status[static_cast<std::size_t>(j)] = Status::kUpper;
          } else {
            a[j] = v;
          }
        }
        pinned_this_iter = true;
      }
    }

    const double new_obj = objective();
    diag.objective_trace.push_back(new_obj);
    const bool small_change = (obj - new_obj) < config.tolerance * std::max(obj, 1e-300);
    obj = new_obj;

    if (pinned_this_iter) {
      if (small_change) {
        converged = true;
        break;
      }
      continue;
    }

    // At the free-set optimum; look for a pinned coefficient whose KKT
    // multiplier has the wrong sign.
    const Eigen::VectorXd g = L.transpose() * (L * a - rhs_full);
    std::vector<int> candidates;
    for (std::size_t j = 0; j < q; ++j) {
      if (status[j] == Status::kLower && g[static_cast<Eigen::Index>(j)] < -kkt_tol) {
        candidates.push_back(static_cast<int>(j));
      } else if (status[j] == Status::kUpper && g[static_cast<Eigen::Index>(j)] > kkt_tol) {
        candidates.push_back(static_cast<int>(j));
      }
    }
    if (candidates.empty()) {
      converged = true;
      break;
    }
    if (small_change) {
      converged = true;
      break;
    }
    std::sort(candidates.begin(), candidates.end(), [&](int x, int y) {
      const double gx = std::fabs(g[x]);
      const double gy = std::fabs(g[y]);
      if (gx != gy) return gx > gy;
      return x < y;
    });

    // Release the strongest candidate that actually moves off its bound;
    // refusing zero-progress releases prevents cycling.
    bool released = false;
    for (int j : candidates) {
      const Status came_from = status[static_cast<std::size_t>(j)];
      status[static_cast<std::size_t>(j)] = Status::kFree;
      bool scratch = false;
      const std::vector<int> trial_free = collect_free();
      const Eigen::VectorXd z = solve_free(trial_free, scratch);
      const auto pos = std::find(trial_free.begin(), trial_free.end(), j);
      const double zj = z[static_cast<Eigen::Index>(pos - trial_free.begin())];
      const bool improves = came_from == Status::kUpper ? zj < box.upper[j] : zj > box.lower[j];
      if (improves) {
        released = true;
        break;
      }
      status[static_cast<std::size_t>(j)] = came_from;
    }
    if (!released) {
      converged = true;
      break;
    }
  }

  diag.iterations = iter;
  diag.converged = converged;
  diag.final_objective = objective();
  diag.solve_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start)
          .count();
  for (std::size_t j = 0; j < q; ++j) {
    if (status[j] == Status::kLower) diag.at_lower.push_back(static_cast<int>(j));
    if (status[j] == Status::kUpper) diag.at_upper.push_back(static_cast<int>(j));
  }
  result.coefficients.assign(a.data(), a.data() + q);
  return result;
}

KktReport kkt_check(const polynomial::DesignMatrix& matrix, std::span<const double> b,
                    std::span<const double> coefficients, const bounds::CoefficientBounds& box) {
  const std::size_t m = matrix.rows;
  const std::size_t q = matrix.cols;
  require(b.size() == m && coefficients.size() == q, "kkt_check: shape mismatch");
  require(box.lower.size() == q && box.upper.size() == q, "kkt_check: bounds misaligned");

  Eigen::MatrixXd L =
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          matrix.data.data(), static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(q));
  Eigen::VectorXd bv = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(m));
  Eigen::VectorXd av = Eigen::Map<const Eigen::VectorXd>(coefficients.data(),
                                                         static_cast<Eigen::Index>(q));

  const Eigen::VectorXd g = 2.0 * (L.transpose() * (L * av - bv));
  KktReport report;
  report.scale = (L.transpose() * bv).norm();
  for (std::size_t j = 0; j < q; ++j) {
    const double gj = g[static_cast<Eigen::Index>(j)];
    if (coefficients[j] <= box.lower[j]) {
      report.max_bound_violation = std::max(report.max_bound_violation, std::max(0.0, -gj));
    } else if (coefficients[j] >= box.upper[j]) {
      report.max_bound_violation = std::max(report.max_bound_violation, std::max(0.0, gj));
    } else {
      report.max_free_gradient = std::max(report.max_free_gradient, std::fabs(gj));
    }
  }
  return report;
}

}  // namespace fairpoly::solver
