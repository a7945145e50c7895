#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairpoly/geometry.hpp"
#include "fairpoly/mechanisms.hpp"
#include "fairpoly/metrics.hpp"
#include "fairpoly/solver.hpp"
#include "fairpoly/types.hpp"

namespace fairpoly::io {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IngestOptions {
  Mode mode = Mode::kDistance;
  char delimiter = ',';
  bool skip_bad = false;  // skip malformed rows instead of aborting
  std::optional<std::vector<double>> reference;  // compute DtR from coordinates
  double p = 2.0;
};

struct IngestResult {
  std::vector<std::string> ids;
  std::vector<std::vector<double>> raw_columns;  // coordinate or DtR columns as read
  metrics::ScoredDataset dataset;                // normalized
  geometry::AffineTransform transform;           // zone mode normalization
  double gamma = 1.0;                            // distance mode normalizer
  std::size_t rows_read = 0;
  std::size_t rows_rejected = 0;
  std::vector<std::string> warnings;
  std::string input_digest;  // fnv1a of the raw bytes
};

/// Parses `id,dtr,score` or `id,x1[,...,xk],score` delimited text with a
/// mandatory header row, validates every field, and normalizes the spatial
/// columns (DtR by its maximum; coordinates onto [-1,1] per dimension).
IngestResult ingest(const std::string& path, const IngestOptions& options);

struct ModelFile {
  int format_version = 1;
  Mode mode = Mode::kDistance;
  int k = 1;
  double p = 2.0;
  int degree = 1;
  double c = 1.0;
  std::string theorem_variant;
  double gamma = 1.0;
  geometry::AffineTransform transform;
  mechanisms::FairPolynomial poly;
  std::string input_digest;
  std::string timestamp;
  solver::SolverConfig solver_cfg;
};

ModelFile make_model(const mechanisms::FitReport& report, const std::string& input_digest,
                     const std::string& timestamp, const solver::SolverConfig& solver_cfg);

/// Versioned key-value text format; save -> load -> save is byte-identical.
void save_model(const std::string& path, const ModelFile& model);
ModelFile load_model(const std::string& path);

void write_scores(const std::string& path, std::span<const std::string> ids,
                  std::span<const double> original, std::span<const double> fair);
void write_audit_report(const std::string& path, const metrics::AuditReport& report, Mode mode);
void write_fit_report(const std::string& path, const mechanisms::FitReport& report,
                      std::size_t rows);
void write_baseline_report(const std::string& path, const mechanisms::BaselineResult& result,
                           const mechanisms::BaselineParams& params, Mode mode, double c);
void write_sweep_table(const std::string& path, std::span<const mechanisms::SweepRow> rows);
void write_degree_table(const std::string& path, const mechanisms::DegreeSelection& selection);

/// Shortest round-trip decimal form (std::to_chars); parsing it recovers the
/// exact double.
std::string format_full(double v);
/// Report form: 9 significant digits.
std::string format_g9(double v);

std::uint64_t fnv1a64(std::span<const char> bytes);
std::string digest_hex(std::uint64_t digest);

/// ISO-8601 UTC timestamp. Honors SOURCE_DATE_EPOCH for reproducible output.
std::string make_timestamp();

}  // namespace fairpoly::io
