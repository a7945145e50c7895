#include "fairpoly/kernels.hpp"

#if defined(FAIRPOLY_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>

// 4-lane double kernels. Arithmetic uses plain mul/add (no FMA) in the same
// per-element order as the scalar reference, and _mm256_sqrt_pd is correctly
// rounded, so every lane matches the scalar result bit for bit. Loop tails
// reuse the scalar expressions.

namespace fairpoly::kernels::detail {

namespace {

const __m256d kAbsMask =
    _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

inline double reduce_max(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  double m = lanes[0];
  for (int i = 1; i < 4; ++i) {
    if (lanes[i] > m) m = lanes[i];
  }
  return m;
}

}  // namespace

PairAccum audit_dtr_rows_avx2(std::span<const double> dtr, std::span<const double> scores,
                              double c, double slack, std::size_t row_begin,
                              std::size_t row_end) {
  const std::size_t m = dtr.size();
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vslack = _mm256_set1_pd(slack);
  const __m256d vneginf = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  PairAccum acc;
  for (std::size_t i = row_begin; i < row_end; ++i) {
    const double li = dtr[i];
    const double si = scores[i];
    const __m256d vli = _mm256_set1_pd(li);
    const __m256d vsi = _mm256_set1_pd(si);
    __m256d vmax = vneginf;
    std::uint64_t count = 0;
    std::size_t j = i + 1;
    for (; j + 4 <= m; j += 4) {
      const __m256d lj = _mm256_loadu_pd(dtr.data() + j);
      const __m256d sj = _mm256_loadu_pd(scores.data() + j);
      const __m256d d = _mm256_and_pd(_mm256_sub_pd(lj, vli), kAbsMask);
      const __m256d big_d = _mm256_and_pd(_mm256_sub_pd(sj, vsi), kAbsMask);
      const __m256d excess = _mm256_sub_pd(big_d, _mm256_mul_pd(vc, d));
      const __m256d viol = _mm256_cmp_pd(excess, vslack, _CMP_GT_OQ);
      count += static_cast<unsigned>(
          __builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(viol))));
      vmax = _mm256_max_pd(vmax, _mm256_blendv_pd(vneginf, excess, viol));
    }
    double mx = reduce_max(vmax);
    for (; j < m; ++j) {
      const double d = std::fabs(dtr[j] - li);
      const double big_d = std::fabs(scores[j] - si);
      const double excess = big_d - c * d;
      if (excess > slack) {
        ++count;
        if (excess > mx) mx = excess;
      }
    }
    acc.violated += count;
    if (mx > acc.max_excess) acc.max_excess = mx;
    acc.pairs += m - 1 - i;
  }
  return acc;
}

PairAccum audit_zone_rows_avx2(const std::vector<std::vector<double>>& columns,
                               std::span<const double> scores, double p, double c,
                               double slack, std::size_t row_begin, std::size_t row_end) {
  if (p != 1.0 && p != 2.0) {
    // General p needs pow(); keep it on the scalar path for exactness.
    return audit_zone_rows_scalar(columns, scores, p, c, slack, row_begin, row_end);
  }
  const std::size_t k = columns.size();
  const std::size_t m = scores.size();
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vslack = _mm256_set1_pd(slack);
  const __m256d vneginf = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  PairAccum acc;
  for (std::size_t i = row_begin; i < row_end; ++i) {
    const double si = scores[i];
    const __m256d vsi = _mm256_set1_pd(si);
    __m256d vmax = vneginf;
    std::uint64_t count = 0;
    std::size_t j = i + 1;
    for (; j + 4 <= m; j += 4) {
      __m256d sum = _mm256_setzero_pd();
      if (p == 2.0) {
        for (std::size_t q = 0; q < k; ++q) {
          const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(columns[q].data() + j),
                                           _mm256_set1_pd(columns[q][i]));
          sum = _mm256_add_pd(sum, _mm256_mul_pd(dx, dx));
        }
        sum = _mm256_sqrt_pd(sum);
      } else {
        for (std::size_t q = 0; q < k; ++q) {
          const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(columns[q].data() + j),
                                           _mm256_set1_pd(columns[q][i]));
          sum = _mm256_add_pd(sum, _mm256_and_pd(dx, kAbsMask));
        }
      }
      const __m256d big_d = _mm256_and_pd(_mm256_sub_pd(_mm256_loadu_pd(scores.data() + j), vsi),
                                          kAbsMask);
      const __m256d excess = _mm256_sub_pd(big_d, _mm256_mul_pd(vc, sum));
      const __m256d viol = _mm256_cmp_pd(excess, vslack, _CMP_GT_OQ);
      count += static_cast<unsigned>(
          __builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(viol))));
      vmax = _mm256_max_pd(vmax, _mm256_blendv_pd(vneginf, excess, viol));
    }
    double mx = reduce_max(vmax);
    for (; j < m; ++j) {
      double d;
      if (p == 2.0) {
        double sum = 0.0;
        for (std::size_t q = 0; q < k; ++q) {
          const double dx = columns[q][j] - columns[q][i];
          sum = sum + dx * dx;
        }
        d = std::sqrt(sum);
      } else {
        double sum = 0.0;
        for (std::size_t q = 0; q < k; ++q) {
          sum = sum + std::fabs(columns[q][j] - columns[q][i]);
        }
        d = sum;
      }
      const double big_d = std::fabs(scores[j] - si);
      const double excess = big_d - c * d;
      if (excess > slack) {
        ++count;
        if (excess > mx) mx = excess;
      }
    }
    acc.violated += count;
    if (mx > acc.max_excess) acc.max_excess = mx;
    acc.pairs += m - 1 - i;
  }
  return acc;
}

void horner_many_avx2(std::span<const double> coefficients, std::span<const double> xs,
                      std::span<double> out) {
  const int n = static_cast<int>(coefficients.size()) - 1;
  std::size_t i = 0;
  for (; i + 4 <= xs.size(); i += 4) {
    const __m256d x = _mm256_loadu_pd(xs.data() + i);
    __m256d acc = _mm256_set1_pd(coefficients[n]);
    for (int j = n - 1; j >= 0; --j) {
      acc = _mm256_add_pd(_mm256_mul_pd(acc, x), _mm256_set1_pd(coefficients[j]));
    }
    _mm256_storeu_pd(out.data() + i, acc);
  }
  for (; i < xs.size(); ++i) {
    const double x = xs[i];
    double acc = coefficients[n];
    for (int j = n - 1; j >= 0; --j) acc = acc * x + coefficients[j];
    out[i] = acc;
  }
}

}  // namespace fairpoly::kernels::detail

#endif  // FAIRPOLY_HAVE_AVX2
