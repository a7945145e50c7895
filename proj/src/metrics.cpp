#include "fairpoly/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include "fairpoly/kernels.hpp"

namespace fairpoly::metrics {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

void validate_scores(std::span<const double> scores, const char* who) {
  for (double s : scores) {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw std::invalid_argument(std::string(who) + ": score outside [0,1]");
    }
  }
}

double pair_distance(const ScoredDataset& data, std::size_t i, std::size_t j) {
  if (data.mode == Mode::kDistance) {
    return std::fabs(data.columns[0][j] - data.columns[0][i]);
  }
  const double p = data.p;
  if (p == 2.0) {
    double sum = 0.0;
    for (const auto& col : data.columns) {
      const double dx = col[j] - col[i];
      sum = sum + dx * dx;
    }
    return std::sqrt(sum);
  }
  if (p == 1.0) {
    double sum = 0.0;
    for (const auto& col : data.columns) sum = sum + std::fabs(col[j] - col[i]);
    return sum;
  }
  double sum = 0.0;
  for (const auto& col : data.columns) sum += std::pow(std::fabs(col[j] - col[i]), p);
  return std::pow(sum, 1.0 / p);
}

// Row ranges with roughly equal pair counts (row i owns m-1-i pairs).
std::vector<std::size_t> partition_rows(std::size_t m, unsigned workers) {
  const std::uint64_t total = static_cast<std::uint64_t>(m) * (m - 1) / 2;
  std::vector<std::size_t> cuts{0};
  std::uint64_t seen = 0;
  std::size_t row = 0;
  for (unsigned t = 1; t < workers; ++t) {
    const std::uint64_t target = total * t / workers;
    while (row < m && seen < target) {
      seen += m - 1 - row;
      ++row;
    }
    cuts.push_back(row);
  }
  cuts.push_back(m);
  return cuts;
}

}  // namespace

ScoredDataset make_distance_dataset(const geometry::DtRVector& dtr, std::vector<double> scores) {
  require(dtr.size() == scores.size(), "make_distance_dataset: size mismatch");
  validate_scores(scores, "make_distance_dataset");
  ScoredDataset data;
  data.mode = Mode::kDistance;
  data.columns = {dtr.distances};
  data.scores = std::move(scores);
  data.p = dtr.p;
  return data;
}

ScoredDataset make_zone_dataset(std::span<const geometry::SpatialPoint> points,
                                std::vector<double> scores, double p) {
  require(points.size() == scores.size(), "make_zone_dataset: size mismatch");
  require(std::isfinite(p) && p >= 1.0, "make_zone_dataset: norm order must be >= 1");
  validate_scores(scores, "make_zone_dataset");
  ScoredDataset data;
  data.mode = Mode::kZone;
  data.columns = geometry::to_columns(points);
  data.scores = std::move(scores);
  data.p = p;
  return data;
}

double statistical_distance(double score_i, double score_j) {
  require(score_i >= 0.0 && score_i <= 1.0 && score_j >= 0.0 && score_j <= 1.0,
          "statistical_distance: scores must lie in [0,1]");
  return std::fabs(score_i - score_j);
}

AuditReport pairwise_audit(const ScoredDataset& data, std::span<const double> scores_to_audit,
                           double c, const AuditOptions& opts) {
  const std::size_t m = data.size();
  require(m >= 2, "pairwise_audit: need at least two rows");
  require(std::isfinite(c) && c >= 1.0, "pairwise_audit: c must be >= 1");
  require(scores_to_audit.size() == m, "pairwise_audit: scores not aligned with data");
  require(!data.columns.empty(), "pairwise_audit: dataset has no spatial columns");
  for (const auto& col : data.columns) {
    require(col.size() == m, "pairwise_audit: column length mismatch");
  }

  AuditReport report;
  report.c_used = c;

  if (opts.sample_pairs) {
    require(*opts.sample_pairs >= 1, "pairwise_audit: sample size must be positive");
    require(opts.seed.has_value(), "pairwise_audit: sampling requires a seed");
    std::mt19937_64 rng(*opts.seed);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    kernels::PairAccum acc;
    for (std::uint64_t s = 0; s < *opts.sample_pairs; ++s) {
      std::size_t i = pick(rng);
      std::size_t j = pick(rng);
      while (j == i) j = pick(rng);
      const double d = pair_distance(data, i, j);
      const double big_d = std::fabs(scores_to_audit[j] - scores_to_audit[i]);
      const double excess = big_d - c * d;
      ++acc.pairs;
      if (excess > kAuditSlack) {
        ++acc.violated;
        acc.max_excess = std::max(acc.max_excess, excess);
      }
    }
    report.sampled = true;
    report.total_pairs = acc.pairs;
    report.violated_pairs = acc.violated;
    report.max_violation = acc.violated ? acc.max_excess : 0.0;
    report.unfairness_pct = 100.0 * static_cast<double>(acc.violated) /
                            static_cast<double>(acc.pairs);
    return report;
  }

  unsigned workers = opts.threads ? opts.threads : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(m / 64 + 1)));

  const auto cuts = partition_rows(m, workers);
  std::vector<kernels::PairAccum> parts(workers);
  auto run = [&](unsigned t) {
    if (data.mode == Mode::kDistance) {
      parts[t] = kernels::audit_dtr_rows(data.columns[0], scores_to_audit, c, kAuditSlack,
                                         cuts[t], cuts[t + 1]);
    } else {
      parts[t] = kernels::audit_zone_rows(data.columns, scores_to_audit, data.p, c, kAuditSlack,
                                          cuts[t], cuts[t + 1]);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(run, t);
    for (auto& th : pool) th.join();
  }

  kernels::PairAccum acc;
  for (const auto& part : parts) acc.merge(part);
  report.total_pairs = acc.pairs;
  report.violated_pairs = acc.violated;
  report.max_violation = acc.violated ? acc.max_excess : 0.0;
  report.unfairness_pct =
      100.0 * static_cast<double>(acc.violated) / static_cast<double>(acc.pairs);
  return report;
}

double fitting_error(std::span<const double> original, std::span<const double> mapped) {
  require(original.size() == mapped.size(), "fitting_error: length mismatch");
  require(!original.empty(), "fitting_error: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    const double e = original[i] - mapped[i];
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(original.size()));
}

std::vector<double> clamp_scores(std::span<const double> raw) {
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out[i] = std::max(0.0, std::min(1.0, raw[i]));
  }
  return out;
}

}  // namespace fairpoly::metrics
