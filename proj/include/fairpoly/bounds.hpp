#pragma once

#include <string>
#include <vector>

#include "fairpoly/polynomial.hpp"
#include "fairpoly/types.hpp"

namespace fairpoly::bounds {

struct FairnessConfig {
  double c = 1.0;
  int degree = 1;
  int dimension = 1;
  double p = 2.0;
  Mode mode = Mode::kDistance;

  void validate() const;  // throws std::invalid_argument
};

/// Per-coefficient box bounds aligned to the design column map. Non-intercept
/// bounds are symmetric about zero; the intercept is unbounded (it cancels in
/// every pairwise difference).
struct CoefficientBounds {
  std::vector<double> lower;
  std::vector<double> upper;
  std::string theorem_variant;

  std::size_t size() const { return lower.size(); }
};

/// |a_i| <= 6*i*c / (n(n+1)(2n+1)), the linearized univariate bound.
double univariate_bound(int i, int n, double c);

/// |a_i| <= c / k^((p-1)/p), the order-1 k-variable bound.
double order1_bound(int k, double p, double c);

/// |a_ij| <= 6*j*c / (n(n+1)(2n+1) * k^((p-1)/p)), the separable degree-n
/// bound. Reduces exactly to univariate_bound at k = 1.
double separable_bound(int j, int n, int k, double p, double c);

/// Selects the applicable bound family for (k, p, n) and records which one
/// was used. When several apply, the larger (still sufficient) box wins.
CoefficientBounds derive_bounds(const FairnessConfig& config);

struct ConditionCheck {
  bool satisfied = false;
  double slack = 0.0;  // c - sum_i i*|a_i|
};

/// Nonlinear sufficient condition sum_{i>=1} i*|a_i| <= c (slack 1e-9).
ConditionCheck check_nonlinear_condition(const polynomial::UnivariatePolynomial& poly, double c);

struct SeparableCheck {
  bool satisfied = false;
  std::vector<double> per_variable_slack;
};

/// Per-variable condition sum_j j*|a_ij| <= c / k^((p-1)/p); true iff every
/// variable passes.
SeparableCheck check_separable_condition(const polynomial::SeparablePolynomial& poly,
                                         const FairnessConfig& config);

}  // namespace fairpoly::bounds
