#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fairpoly/geometry.hpp"
#include "fairpoly/types.hpp"

namespace fairpoly::metrics {

/// Absolute tolerance added to c*d when testing a pairwise constraint, so
/// floating-point roundoff in distances is not reported as a violation.
inline constexpr double kAuditSlack = 1e-9;

/// Spatial inputs plus likelihood scores. Distance-based datasets hold a
/// single normalized DtR column; zone-based datasets hold k coordinate
/// columns in [-1,1] and the norm order p of the similarity distance.
struct ScoredDataset {
  Mode mode = Mode::kDistance;
  std::vector<std::vector<double>> columns;
  std::vector<double> scores;
  double p = 2.0;

  std::size_t size() const { return scores.size(); }
  std::size_t dim() const { return columns.size(); }
};

ScoredDataset make_distance_dataset(const geometry::DtRVector& dtr, std::vector<double> scores);
ScoredDataset make_zone_dataset(std::span<const geometry::SpatialPoint> points,
                                std::vector<double> scores, double p);

struct AuditReport {
  std::uint64_t total_pairs = 0;
  std::uint64_t violated_pairs = 0;
  double unfairness_pct = 0.0;
  double max_violation = 0.0;  // largest excess of D over c*d among violated pairs
  double c_used = 1.0;
  bool sampled = false;
};

/// Total variation distance between two binary outcome distributions given
/// by their positive-outcome likelihoods: |score_i - score_j|.
double statistical_distance(double score_i, double score_j);

struct AuditOptions {
  std::optional<std::uint64_t> sample_pairs;  // exhaustive when empty
  std::optional<std::uint64_t> seed;          // required when sampling
  unsigned threads = 0;                       // 0 = hardware default
};

/// Counts pairs whose statistical distance exceeds c times their spatial
/// distance (plus kAuditSlack). Exhaustive over all m(m-1)/2 pairs unless
/// sampling is requested. The pair space is partitioned across threads and
/// merged with integer sums and an exact max-reduce, so the result does not
/// depend on the thread count.
AuditReport pairwise_audit(const ScoredDataset& data, std::span<const double> scores_to_audit,
                           double c, const AuditOptions& opts = {});

/// Root-mean-square difference between original and mapped scores.
double fitting_error(std::span<const double> original, std::span<const double> mapped);

/// Elementwise max(0, min(1, v)). 1-Lipschitz, so it never increases any
/// pairwise statistical distance.
std::vector<double> clamp_scores(std::span<const double> raw);

}  // namespace fairpoly::metrics
