#include <algorithm>
#include <atomic>
#include <stdexcept>

#include "fairpoly/kernels.hpp"

namespace fairpoly::kernels {

namespace {

bool probe_avx2() {
#if defined(FAIRPOLY_HAVE_AVX2)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

std::atomic<Backend> g_forced{Backend::kAuto};

Backend resolve() {
  const Backend forced = g_forced.load(std::memory_order_relaxed);
  if (forced != Backend::kAuto) return forced;
  static const Backend detected = avx2_available() ? Backend::kAvx2 : Backend::kScalar;
  return detected;
}

}  // namespace

bool avx2_available() {
  static const bool available = probe_avx2();
  return available;
}

Backend active_backend() { return resolve(); }

const char* backend_name() {
  return resolve() == Backend::kAvx2 ? "avx2" : "scalar";
}

void force_backend(Backend b) {
  if (b == Backend::kAvx2 && !avx2_available()) {
    throw std::invalid_argument("force_backend: AVX2 is not available on this CPU");
  }
  g_forced.store(b, std::memory_order_relaxed);
}

void PairAccum::merge(const PairAccum& other) {
  pairs += other.pairs;
  violated += other.violated;
  max_excess = std::max(max_excess, other.max_excess);
}

PairAccum audit_dtr_rows(std::span<const double> dtr, std::span<const double> scores,
                         double c, double slack, std::size_t row_begin, std::size_t row_end) {
  if (resolve() == Backend::kAvx2) {
    return detail::audit_dtr_rows_avx2(dtr, scores, c, slack, row_begin, row_end);
  }
  return detail::audit_dtr_rows_scalar(dtr, scores, c, slack, row_begin, row_end);
}

PairAccum audit_zone_rows(const std::vector<std::vector<double>>& columns,
                          std::span<const double> scores, double p, double c, double slack,
                          std::size_t row_begin, std::size_t row_end) {
  if (resolve() == Backend::kAvx2) {
    return detail::audit_zone_rows_avx2(columns, scores, p, c, slack, row_begin, row_end);
  }
  return detail::audit_zone_rows_scalar(columns, scores, p, c, slack, row_begin, row_end);
}

void horner_many(std::span<const double> coefficients, std::span<const double> xs,
                 std::span<double> out) {
  if (resolve() == Backend::kAvx2) {
    detail::horner_many_avx2(coefficients, xs, out);
    return;
  }
  detail::horner_many_scalar(coefficients, xs, out);
}

#if !defined(FAIRPOLY_HAVE_AVX2)

namespace detail {

PairAccum audit_dtr_rows_avx2(std::span<const double> dtr, std::span<const double> scores,
                              double c, double slack, std::size_t row_begin,
                              std::size_t row_end) {
  return audit_dtr_rows_scalar(dtr, scores, c, slack, row_begin, row_end);
}

PairAccum audit_zone_rows_avx2(const std::vector<std::vector<double>>& columns,
                               std::span<const double> scores, double p, double c,
                               double slack, std::size_t row_begin, std::size_t row_end) {
  return audit_zone_rows_scalar(columns, scores, p, c, slack, row_begin, row_end);
}

void horner_many_avx2(std::span<const double> coefficients, std::span<const double> xs,
                      std::span<double> out) {
  horner_many_scalar(coefficients, xs, out);
}

}  // namespace detail

#endif  // !FAIRPOLY_HAVE_AVX2

}  // namespace fairpoly::kernels
