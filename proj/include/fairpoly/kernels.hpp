#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

// Data-parallel inner loops: pairwise Lipschitz audits and batch polynomial
// evaluation. Each kernel has a scalar reference implementation and an AVX2
// variant selected at runtime; both produce bit-identical results (the
// library is built with contraction off and the vector code uses plain
// mul/add, so the IEEE operation sequence per element matches the scalar
// path exactly).

namespace fairpoly::kernels {

enum class Backend { kAuto, kScalar, kAvx2 };

bool avx2_available();
Backend active_backend();          // resolved backend (never kAuto)
const char* backend_name();
void force_backend(Backend b);     // throws if the backend is unavailable

struct PairAccum {
  std::uint64_t pairs = 0;
  std::uint64_t violated = 0;
  double max_excess = -std::numeric_limits<double>::infinity();

  void merge(const PairAccum& other);
};

/// Audit rows [row_begin, row_end) against all later rows, distance-based:
/// pair (i,j) is violated iff |s_j - s_i| - c*|l_j - l_i| > slack.
PairAccum audit_dtr_rows(std::span<const double> dtr, std::span<const double> scores,
                         double c, double slack, std::size_t row_begin, std::size_t row_end);

/// Zone-based variant: the pair distance is the p-norm over the coordinate
/// columns. p = 1 and p = 2 have vector fast paths; other p fall back to the
/// scalar path on every backend.
PairAccum audit_zone_rows(const std::vector<std::vector<double>>& columns,
                          std::span<const double> scores, double p, double c, double slack,
                          std::size_t row_begin, std::size_t row_end);

/// out[i] = coefficients[0] + coefficients[1]*x[i] + ... (Horner).
void horner_many(std::span<const double> coefficients, std::span<const double> xs,
                 std::span<double> out);

namespace detail {

PairAccum audit_dtr_rows_scalar(std::span<const double> dtr, std::span<const double> scores,
                                double c, double slack, std::size_t row_begin,
                                std::size_t row_end);
PairAccum audit_zone_rows_scalar(const std::vector<std::vector<double>>& columns,
                                 std::span<const double> scores, double p, double c,
                                 double slack, std::size_t row_begin, std::size_t row_end);
void horner_many_scalar(std::span<const double> coefficients, std::span<const double> xs,
                        std::span<double> out);

// Defined in the AVX2 translation unit on x86-64; elsewhere they forward to
// the scalar implementations so the symbols always exist.
PairAccum audit_dtr_rows_avx2(std::span<const double> dtr, std::span<const double> scores,
                              double c, double slack, std::size_t row_begin,
                              std::size_t row_end);
PairAccum audit_zone_rows_avx2(const std::vector<std::vector<double>>& columns,
                               std::span<const double> scores, double p, double c,
                               double slack, std::size_t row_begin, std::size_t row_end);
void horner_many_avx2(std::span<const double> coefficients, std::span<const double> xs,
                      std::span<double> out);

}  // namespace detail

}  // namespace fairpoly::kernels
