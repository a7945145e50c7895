#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fairpoly/geometry.hpp"

namespace fairpoly::polynomial {

struct UnivariatePolynomial {
  std::vector<double> coefficients;  // a0 .. an, n >= 1

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }
};

/// Sum of k univariate polynomials sharing one intercept:
/// P(x1..xk) = a0 + sum_i sum_j a_ij * xi^j. components[i][j-1] = a_ij.
/// No cross-variable monomials and no per-component intercepts.
struct SeparablePolynomial {
  double intercept = 0.0;
  std::vector<std::vector<double>> components;

  std::size_t vars() const { return components.size(); }
  int degree() const {
    return components.empty() ? 0 : static_cast<int>(components.front().size());
  }
};

double eval_univariate(const UnivariatePolynomial& poly, double x);
double eval_separable(const SeparablePolynomial& poly, const geometry::SpatialPoint& point);

std::vector<double> eval_univariate_many(const UnivariatePolynomial& poly,
                                         std::span<const double> xs);
std::vector<double> eval_separable_many(const SeparablePolynomial& poly,
                                        const std::vector<std::vector<double>>& columns);

/// Which (variable, power) a design column encodes; the intercept column is
/// {variable = -1, power = 0}.
struct ColumnKey {
  int variable = -1;
  int power = 0;
};

struct DesignMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major
  std::vector<ColumnKey> column_map;

  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// Univariate (Vandermonde) design: row i = (1, x_i, x_i^2, ..., x_i^n).
/// Inputs must already be normalized; any |x| > 1 + 1e-12 is rejected.
DesignMatrix build_design_matrix(std::span<const double> inputs, int degree);

/// Separable design: row i = (1, x1, x1^2, .., x1^n, x2, .., xk^n).
DesignMatrix build_design_matrix(const std::vector<std::vector<double>>& columns, int degree);

std::vector<double> multiply(const DesignMatrix& matrix, std::span<const double> coefficients);

/// Flat coefficient vectors in design-column order.
UnivariatePolynomial unpack_univariate(std::span<const double> coefficients);
SeparablePolynomial unpack_separable(std::span<const double> coefficients, std::size_t vars,
                                     int degree);
std::vector<double> pack_coefficients(const UnivariatePolynomial& poly);
std::vector<double> pack_coefficients(const SeparablePolynomial& poly);

}  // namespace fairpoly::polynomial
