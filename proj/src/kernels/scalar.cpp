#include <cmath>

#include "fairpoly/kernels.hpp"

// Reference implementations. The AVX2 variants replicate the exact IEEE
// operation sequence used here, so results are bit-identical across backends.

namespace fairpoly::kernels::detail {

PairAccum audit_dtr_rows_scalar(std::span<const double> dtr, std::span<const double> scores,
                                double c, double slack, std::size_t row_begin,
                                std::size_t row_end) {
  const std::size_t m = dtr.size();
  PairAccum acc;
  for (std::size_t i = row_begin; i < row_end; ++i) {
    const double li = dtr[i];
    const double si = scores[i];
    for (std::size_t j = i + 1; j < m; ++j) {
      const double d = std::fabs(dtr[j] - li);
      const double big_d = std::fabs(scores[j] - si);
      const double excess = big_d - c * d;
      if (excess > slack) {
        ++acc.violated;
        if (excess > acc.max_excess) acc.max_excess = excess;
      }
    }
    acc.pairs += m - 1 - i;
  }
  return acc;
}

PairAccum audit_zone_rows_scalar(const std::vector<std::vector<double>>& columns,
                                 std::span<const double> scores, double p, double c,
                                 double slack, std::size_t row_begin, std::size_t row_end) {
  const std::size_t k = columns.size();
  const std::size_t m = scores.size();
  PairAccum acc;
  for (std::size_t i = row_begin; i < row_end; ++i) {
    const double si = scores[i];
    for (std::size_t j = i + 1; j < m; ++j) {
      double d;
      if (p == 2.0) {
        double sum = 0.0;
        for (std::size_t q = 0; q < k; ++q) {
          const double dx = columns[q][j] - columns[q][i];
          sum = sum + dx * dx;
        }
        d = std::sqrt(sum);
      } else if (p == 1.0) {
        double sum = 0.0;
        for (std::size_t q = 0; q < k; ++q) {
          sum = sum + std::fabs(columns[q][j] - columns[q][i]);
        }
        d = sum;
      } else {
        double sum = 0.0;
        for (std::size_t q = 0; q < k; ++q) {
          sum += std::pow(std::fabs(columns[q][j] - columns[q][i]), p);
        }
        d = std::pow(sum, 1.0 / p);
      }
      const double big_d = std::fabs(scores[j] - si);
      const double excess = big_d - c * d;
      if (excess > slack) {
        ++acc.violated;
        if (excess > acc.max_excess) acc.max_excess = excess;
      }
    }
    acc.pairs += m - 1 - i;
  }
  return acc;
}

void horner_many_scalar(std::span<const double> coefficients, std::span<const double> xs,
                        std::span<double> out) {
  const int n = static_cast<int>(coefficients.size()) - 1;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    double acc = coefficients[n];
    for (int j = n - 1; j >= 0; --j) acc = acc * x + coefficients[j];
    out[i] = acc;
  }
}

}  // namespace fairpoly::kernels::detail
