#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fairpoly/bounds.hpp"
#include "fairpoly/polynomial.hpp"

namespace fairpoly::solver {

struct SolverConfig {
  int max_iterations = 300;
  double tolerance = 1e-2;  // relative objective-change stopping threshold
  std::optional<std::uint64_t> seed;  // random feasible start when set

  void validate() const;
};

struct SolveDiagnostics {
  int iterations = 0;
  double final_objective = 0.0;  // ||L a - b||_2
  double solve_time_ms = 0.0;
  bool converged = false;
  bool rank_deficient = false;   // a free-set sub-solve needed a least-norm solution
  bool underdetermined = false;  // fewer rows than columns
  std::vector<int> at_lower;     // columns that ended pinned at a bound
  std::vector<int> at_upper;
  std::vector<double> objective_trace;  // objective after each iteration (non-increasing)
};

struct BvlsResult {
  std::vector<double> coefficients;
  SolveDiagnostics diagnostics;
};

/// Bounded-variable least squares: minimize ||L a - b||_2 subject to
/// lower <= a <= upper, by active-set iteration (Stark-Parker style): solve
/// the unconstrained problem on the free set, clip the step at the first
/// bound hit, and release the bound variable with the most negative KKT
/// multiplier until none remains. Returned coefficients satisfy their bounds
/// exactly; the result is deterministic given the config.
BvlsResult bvls_solve(const polynomial::DesignMatrix& matrix, std::span<const double> b,
                      const bounds::CoefficientBounds& box, const SolverConfig& config = {});

struct KktReport {
  double max_free_gradient = 0.0;    // max |g_j| over free coefficients, g = 2 L^T (L a - b)
  double max_bound_violation = 0.0;  // wrong-sign gradient magnitude at a pinned bound
  double scale = 0.0;                // ||L^T b||_2

  bool satisfied(double rel_tol = 1e-6) const {
    const double tol = rel_tol * scale;
    return max_free_gradient <= tol && max_bound_violation <= tol;
  }
};

KktReport kkt_check(const polynomial::DesignMatrix& matrix, std::span<const double> b,
                    std::span<const double> coefficients, const bounds::CoefficientBounds& box);

}  // namespace fairpoly::solver
