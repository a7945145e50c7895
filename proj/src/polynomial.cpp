#include "fairpoly/polynomial.hpp"

#include <cmath>
#include <stdexcept>

#include "fairpoly/kernels.hpp"

namespace fairpoly::polynomial {

namespace {

constexpr double kDomainSlack = 1e-12;

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

void check_normalized(std::span<const double> xs) {
  for (double x : xs) {
    if (!(std::fabs(x) <= 1.0 + kDomainSlack)) {
      throw std::invalid_argument("design input outside [-1,1]: normalize first");
    }
  }
}

}  // namespace

double eval_univariate(const UnivariatePolynomial& poly, double x) {
  const auto& a = poly.coefficients;
  require(!a.empty(), "eval_univariate: empty coefficients");
  double acc = a.back();
  for (int j = static_cast<int>(a.size()) - 2; j >= 0; --j) acc = acc * x + a[j];
  return acc;
}

double eval_separable(const SeparablePolynomial& poly, const geometry::SpatialPoint& point) {
  require(point.dim() == poly.vars(), "eval_separable: dimension mismatch");
  double total = poly.intercept;
  for (std::size_t i = 0; i < poly.vars(); ++i) {
    const auto& comp = poly.components[i];
    const double x = point.coords[i];
    // P_i(x) = x * (a_i1 + x * (a_i2 + ...)); no component intercept.
    double acc = comp.back();
    for (int j = static_cast<int>(comp.size()) - 2; j >= 0; --j) acc = acc * x + comp[j];
    total += acc * x;
  }
  return total;
}

std::vector<double> eval_univariate_many(const UnivariatePolynomial& poly,
                                         std::span<const double> xs) {
  require(!poly.coefficients.empty(), "eval_univariate_many: empty coefficients");
  std::vector<double> out(xs.size());
  kernels::horner_many(poly.coefficients, xs, out);
  return out;
}

std::vector<double> eval_separable_many(const SeparablePolynomial& poly,
                                        const std::vector<std::vector<double>>& columns) {
  require(columns.size() == poly.vars(), "eval_separable_many: dimension mismatch");
  require(!columns.empty(), "eval_separable_many: no columns");
  const std::size_t m = columns.front().size();
  std::vector<double> out(m, poly.intercept);
  std::vector<double> tmp(m);
  std::vector<double> coeffs;
  for (std::size_t i = 0; i < poly.vars(); ++i) {
    require(columns[i].size() == m, "eval_separable_many: ragged columns");
    coeffs.assign(1, 0.0);  // zero constant term; powers start at 1
    coeffs.insert(coeffs.end(), poly.components[i].begin(), poly.components[i].end());
    kernels::horner_many(coeffs, columns[i], tmp);
    for (std::size_t r = 0; r < m; ++r) out[r] += tmp[r];
  }
  return out;
}

DesignMatrix build_design_matrix(std::span<const double> inputs, int degree) {
  require(degree >= 1, "build_design_matrix: degree must be >= 1");
  require(!inputs.empty(), "build_design_matrix: empty input");
  check_normalized(inputs);
  DesignMatrix mat;
  mat.rows = inputs.size();
  mat.cols = static_cast<std::size_t>(degree) + 1;
  mat.data.resize(mat.rows * mat.cols);
  mat.column_map.push_back({-1, 0});
  for (int j = 1; j <= degree; ++j) mat.column_map.push_back({0, j});
  for (std::size_t r = 0; r < mat.rows; ++r) {
    double v = 1.0;
    mat.data[r * mat.cols] = 1.0;
    for (int j = 1; j <= degree; ++j) {
      v *= inputs[r];
      mat.data[r * mat.cols + j] = v;
    }
  }
  return mat;
}

DesignMatrix build_design_matrix(const std::vector<std::vector<double>>& columns, int degree) {
  require(degree >= 1, "build_design_matrix: degree must be >= 1");
  require(!columns.empty(), "build_design_matrix: no coordinate columns");
  const std::size_t m = columns.front().size();
  require(m >= 1, "build_design_matrix: empty input");
  for (const auto& col : columns) {
    require(col.size() == m, "build_design_matrix: ragged columns");
    check_normalized(col);
  }
  const std::size_t k = columns.size();
  DesignMatrix mat;
  mat.rows = m;
  mat.cols = 1 + k * static_cast<std::size_t>(degree);
  mat.data.resize(mat.rows * mat.cols);
  mat.column_map.push_back({-1, 0});
  for (std::size_t i = 0; i < k; ++i) {
    for (int j = 1; j <= degree; ++j) mat.column_map.push_back({static_cast<int>(i), j});
  }
  for (std::size_t r = 0; r < m; ++r) {
    double* row = mat.data.data() + r * mat.cols;
    row[0] = 1.0;
    std::size_t col = 1;
    for (std::size_t i = 0; i < k; ++i) {
      double v = 1.0;
      for (int j = 1; j <= degree; ++j) {
        v *= columns[i][r];
        row[col++] = v;
      }
    }
  }
  return mat;
}

std::vector<double> multiply(const DesignMatrix& matrix, std::span<const double> coefficients) {
  require(coefficients.size() == matrix.cols, "multiply: coefficient count mismatch");
  std::vector<double> out(matrix.rows, 0.0);
  for (std::size_t r = 0; r < matrix.rows; ++r) {
    const double* row = matrix.data.data() + r * matrix.cols;
    double acc = 0.0;
    for (std::size_t c = 0; c < matrix.cols; ++c) acc += row[c] * coefficients[c];
    out[r] = acc;
  }
  return out;
}

UnivariatePolynomial unpack_univariate(std::span<const double> coefficients) {
  require(coefficients.size() >= 2, "unpack_univariate: need degree >= 1");
  return UnivariatePolynomial{{coefficients.begin(), coefficients.end()}};
}

SeparablePolynomial unpack_separable(std::span<const double> coefficients, std::size_t vars,
                                     int degree) {
  require(degree >= 1 && vars >= 1, "unpack_separable: bad shape");
  require(coefficients.size() == 1 + vars * static_cast<std::size_t>(degree),
          "unpack_separable: coefficient count mismatch");
  SeparablePolynomial poly;
  poly.intercept = coefficients[0];
  poly.components.resize(vars);
  std::size_t idx = 1;
  for (std::size_t i = 0; i < vars; ++i) {
    poly.components[i].assign(coefficients.begin() + idx, coefficients.begin() + idx + degree);
    idx += degree;
  }
  return poly;
}

std::vector<double> pack_coefficients(const UnivariatePolynomial& poly) {
  return poly.coefficients;
}

std::vector<double> pack_coefficients(const SeparablePolynomial& poly) {
  std::vector<double> out;
  out.reserve(1 + poly.vars() * static_cast<std::size_t>(poly.degree()));
  out.push_back(poly.intercept);
  for (const auto& comp : poly.components) out.insert(out.end(), comp.begin(), comp.end());
  return out;
}

}  // namespace fairpoly::polynomial
