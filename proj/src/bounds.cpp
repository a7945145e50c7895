#include "fairpoly/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fairpoly::bounds {

namespace {

constexpr double kConditionSlack = 1e-9;

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace

void FairnessConfig::validate() const {
  require(std::isfinite(c) && c >= 1.0, "FairnessConfig: c must be >= 1");
  require(degree >= 1, "FairnessConfig: degree must be >= 1");
  require(dimension >= 1, "FairnessConfig: dimension must be >= 1");
  require(std::isfinite(p) && p >= 1.0, "FairnessConfig: norm order must be >= 1");
  if (mode == Mode::kDistance) {
    require(dimension == 1, "FairnessConfig: distance-based mode forces k = 1");
  }
}

double univariate_bound(int i, int n, double c) {
  const double den = static_cast<double>(n) * (n + 1) * (2 * n + 1);
  return 6.0 * i * c / den;
}

double order1_bound(int k, double p, double c) {
  return c / std::pow(static_cast<double>(k), (p - 1.0) / p);
}

double separable_bound(int j, int n, int k, double p, double c) {
  const double den = static_cast<double>(n) * (n + 1) * (2 * n + 1) *
                     std::pow(static_cast<double>(k), (p - 1.0) / p);
  return 6.0 * j * c / den;
}

CoefficientBounds derive_bounds(const FairnessConfig& config) {
  config.validate();
  const int n = config.degree;
  const int k = config.dimension;
  const double c = config.c;
  const double p = config.p;

  CoefficientBounds out;
  const std::size_t cols = 1 + static_cast<std::size_t>(k) * n;
  out.lower.resize(cols);
  out.upper.resize(cols);
  out.lower[0] = -std::numeric_limits<double>::infinity();
  out.upper[0] = std::numeric_limits<double>::infinity();

  if (k == 1) {
    out.theorem_variant = "univariate";
    for (int j = 1; j <= n; ++j) {
      const double b = univariate_bound(j, n, c);
      out.lower[j] = -b;
      out.upper[j] = b;
    }
    return out;
  }

  if (n == 1) {
    // Both the order-1 theorem and the n = 1 specialization of the general
    // separable bound apply; keep the larger (still sufficient) box.
    const double specific = order1_bound(k, p, c);
    const double general = separable_bound(1, 1, k, p, c);
    double b = specific;
    if (general > specific) {
      b = general;
      out.theorem_variant = "separable-general";
    } else if (k == 2 && p == 2.0) {
      out.theorem_variant = "bivariate-euclidean";
    } else if (p == 2.0) {
      out.theorem_variant = "kvariate-euclidean";
    } else {
      out.theorem_variant = "kvariate-pnorm";
    }
    for (std::size_t col = 1; col < cols; ++col) {
      out.lower[col] = -b;
      out.upper[col] = b;
    }
    return out;
  }

  out.theorem_variant = "separable-general";
  std::size_t col = 1;
  for (int i = 0; i < k; ++i) {
    for (int j = 1; j <= n; ++j) {
      const double b = separable_bound(j, n, k, p, c);
      out.lower[col] = -b;
      out.upper[col] = b;
      ++col;
    }
  }
  return out;
}

ConditionCheck check_nonlinear_condition(const polynomial::UnivariatePolynomial& poly,
                                         double c) {
  double sum = 0.0;
  for (std::size_t i = 1; i < poly.coefficients.size(); ++i) {
    sum += static_cast<double>(i) * std::fabs(poly.coefficients[i]);
  }
  return {sum <= c + kConditionSlack, c - sum};
}

SeparableCheck check_separable_condition(const polynomial::SeparablePolynomial& poly,
                                         const FairnessConfig& config) {
  config.validate();
  require(poly.vars() == static_cast<std::size_t>(config.dimension),
          "check_separable_condition: variable count mismatch");
  require(poly.degree() == config.degree, "check_separable_condition: degree mismatch");

  const double threshold = config.c / std::pow(static_cast<double>(config.dimension),
                                               (config.p - 1.0) / config.p);
  SeparableCheck out;
  out.satisfied = true;
  out.per_variable_slack.reserve(poly.vars());
  for (const auto& comp : poly.components) {
    double sum = 0.0;
    for (std::size_t j = 0; j < comp.size(); ++j) {
      sum += static_cast<double>(j + 1) * std::fabs(comp[j]);
    }
    out.per_variable_slack.push_back(threshold - sum);
    if (sum > threshold + kConditionSlack) out.satisfied = false;
  }
  return out;
}

}  // namespace fairpoly::bounds
