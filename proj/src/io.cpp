#include "fairpoly/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

namespace fairpoly::io {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::string field;
  for (char ch : line) {
    if (ch == delimiter) {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(ch);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

bool parse_double(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string current;
  for (char ch : text) {
    if (ch == '\n') {
      if (!current.empty() && current.back() == '\r') current.pop_back();
      lines.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  if (!current.empty()) {
    if (current.back() == '\r') current.pop_back();
    lines.push_back(std::move(current));
  }
  return lines;
}

std::string sanitize_field(std::string text) {
  std::replace(text.begin(), text.end(), ',', ';');
  std::replace(text.begin(), text.end(), '\n', ' ');
  return text;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << content;
  if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace

std::string format_full(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw DataError("number formatting failed");
  return std::string(buf, ptr);
}

std::string format_g9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return std::string(buf);
}

std::uint64_t fnv1a64(std::span<const char> bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string digest_hex(std::uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(digest));
  return std::string(buf);
}

std::string make_timestamp() {
  std::time_t now = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long v = std::strtoll(epoch, &end, 10);
    if (end && *end == '\0') now = static_cast<std::time_t>(v);
  }
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return std::string(buf);
}

IngestResult ingest(const std::string& path, const IngestOptions& options) {
  const std::string bytes = read_file(path);
  const auto lines = split_lines(bytes);
  if (lines.empty()) throw DataError("'" + path + "': empty file");

  IngestResult result;
  result.input_digest = "fnv1a:" + digest_hex(fnv1a64(bytes));

  const auto header = split(lines[0], options.delimiter);
  if (header.size() < 3 || header.front() != "id" || header.back() != "score") {
    throw DataError("'" + path + "': header must be id,dtr,score or id,x1[,...,xk],score");
  }
  const std::size_t mid = header.size() - 2;
  bool dtr_layout = false;
  if (mid == 1 && header[1] == "dtr") {
    dtr_layout = true;
  } else {
    for (std::size_t d = 0; d < mid; ++d) {
      if (header[1 + d] != "x" + std::to_string(d + 1)) {
        throw DataError("'" + path + "': expected coordinate column x" + std::to_string(d + 1) +
                        ", got '" + header[1 + d] + "'");
      }
    }
  }

  if (options.mode == Mode::kZone && dtr_layout) {
    throw DataError("'" + path + "': zone mode requires coordinate columns");
  }
  if (options.mode == Mode::kDistance && !dtr_layout && !options.reference) {
    throw DataError("'" + path +
                    "': distance mode needs a dtr column or a reference point to compute one");
  }
  if (options.reference) {
    if (options.mode == Mode::kZone) {
      result.warnings.push_back("reference point ignored in zone mode");
    } else if (dtr_layout) {
      result.warnings.push_back("reference point ignored: input already has a dtr column");
    } else if (options.reference->size() != mid) {
      throw DataError("'" + path + "': reference dimension does not match coordinate columns");
    }
  }

  result.raw_columns.assign(mid, {});
  std::vector<double> scores;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    const auto fields = split(lines[ln], options.delimiter);
    const std::string where = "'" + path + "' line " + std::to_string(ln + 1);
    auto reject = [&](const std::string& why) {
      if (options.skip_bad) {
        ++result.rows_rejected;
        result.warnings.push_back(where + ": " + why + " (row skipped)");
        return true;
      }
      throw DataError(where + ": " + why);
    };
    if (fields.size() != header.size()) {
      if (reject("expected " + std::to_string(header.size()) + " fields, got " +
                 std::to_string(fields.size()))) {
        continue;
      }
    }
    if (fields[0].empty()) {
      if (reject("empty id")) continue;
    }
    std::vector<double> values(mid);
    bool bad = false;
    for (std::size_t d = 0; d < mid && !bad; ++d) {
      if (!parse_double(fields[1 + d], values[d])) {
        bad = reject("malformed number '" + fields[1 + d] + "'");
      }
    }
    if (bad) continue;
    if (dtr_layout && values[0] < 0.0) {
      if (reject("dtr must be non-negative")) continue;
    }
    double score = 0.0;
    if (!parse_double(fields.back(), score)) {
      if (reject("malformed score '" + fields.back() + "'")) continue;
    }
    if (!(score >= 0.0 && score <= 1.0)) {
      if (reject("score " + fields.back() + " outside [0,1]")) continue;
    }
    result.ids.push_back(fields[0]);
    for (std::size_t d = 0; d < mid; ++d) result.raw_columns[d].push_back(values[d]);
    scores.push_back(score);
    ++result.rows_read;
  }

  if (result.rows_read == 0) throw DataError("'" + path + "': no valid data rows");

  if (options.mode == Mode::kDistance) {
    geometry::DtRVector dtr;
    if (dtr_layout) {
      dtr.distances = result.raw_columns[0];
      dtr.p = options.p;
      double gamma = 0.0;
      for (double v : dtr.distances) gamma = std::max(gamma, v);
      if (gamma <= 0.0) throw DataError("'" + path + "': all dtr values are zero");
      for (double& v : dtr.distances) v /= gamma;
      dtr.gamma = gamma;
    } else {
      std::vector<geometry::SpatialPoint> points(result.rows_read);
      for (std::size_t i = 0; i < result.rows_read; ++i) {
        points[i].coords.resize(mid);
        for (std::size_t d = 0; d < mid; ++d) points[i].coords[d] = result.raw_columns[d][i];
      }
      geometry::SpatialPoint ref{*options.reference};
      dtr = geometry::compute_dtr(points, ref, options.p);
    }
    result.gamma = dtr.gamma;
    result.dataset = metrics::make_distance_dataset(dtr, std::move(scores));
    result.transform = geometry::AffineTransform::identity(0);
  } else {
    std::vector<geometry::SpatialPoint> points(result.rows_read);
    for (std::size_t i = 0; i < result.rows_read; ++i) {
      points[i].coords.resize(mid);
      for (std::size_t d = 0; d < mid; ++d) points[i].coords[d] = result.raw_columns[d][i];
    }
    auto normalized = geometry::normalize_coords(points);
    for (std::size_t d = 0; d < mid; ++d) {
      if (normalized.transform.degenerate(d)) {
        result.warnings.push_back("column x" + std::to_string(d + 1) +
                                  " is constant; normalized to 0");
      }
    }
    result.transform = normalized.transform;
    result.dataset = metrics::make_zone_dataset(normalized.points, std::move(scores), options.p);
  }
  return result;
}

ModelFile make_model(const mechanisms::FitReport& report, const std::string& input_digest,
                     const std::string& timestamp, const solver::SolverConfig& solver_cfg) {
  ModelFile model;
  model.mode = report.config.mode;
  model.k = report.config.dimension;
  model.p = report.config.p;
  model.degree = report.config.degree;
  model.c = report.config.c;
  model.theorem_variant = report.theorem_variant;
  model.gamma = report.gamma;
  model.transform = report.normalization;
  model.poly = report.poly;
  model.input_digest = input_digest;
  model.timestamp = timestamp;
  model.solver_cfg = solver_cfg;
  return model;
}

void save_model(const std::string& path, const ModelFile& model) {
  std::ostringstream out;
  out << "format_version: " << model.format_version << "\n";
  out << "mode: " << to_string(model.mode) << "\n";
  out << "k: " << model.k << "\n";
  out << "p: " << format_full(model.p) << "\n";
  out << "n: " << model.degree << "\n";
  out << "c: " << format_full(model.c) << "\n";
  out << "theorem_variant: " << model.theorem_variant << "\n";
  out << "gamma: " << format_full(model.gamma) << "\n";
  out << "transform_dims: " << model.transform.dim() << "\n";
  for (std::size_t d = 0; d < model.transform.dim(); ++d) {
    out << "transform: " << d << " " << format_full(model.transform.center[d]) << " "
        << format_full(model.transform.halfwidth[d]) << "\n";
  }
  std::vector<double> coeffs;
  if (const auto* uni = std::get_if<polynomial::UnivariatePolynomial>(&model.poly)) {
    coeffs = polynomial::pack_coefficients(*uni);
    out << "coefficient_count: " << coeffs.size() << "\n";
    out << "coeff: -1 0 " << format_full(coeffs[0]) << "\n";
    for (std::size_t j = 1; j < coeffs.size(); ++j) {
      out << "coeff: 0 " << j << " " << format_full(coeffs[j]) << "\n";
    }
  } else {
    const auto& sep = std::get<polynomial::SeparablePolynomial>(model.poly);
    coeffs = polynomial::pack_coefficients(sep);
    out << "coefficient_count: " << coeffs.size() << "\n";
    out << "coeff: -1 0 " << format_full(coeffs[0]) << "\n";
    std::size_t idx = 1;
    for (std::size_t v = 0; v < sep.vars(); ++v) {
      for (int j = 1; j <= sep.degree(); ++j) {
        out << "coeff: " << v << " " << j << " " << format_full(coeffs[idx++]) << "\n";
      }
    }
  }
  out << "input_digest: " << model.input_digest << "\n";
  out << "timestamp: " << model.timestamp << "\n";
  out << "solver_max_iterations: " << model.solver_cfg.max_iterations << "\n";
  out << "solver_tolerance: " << format_full(model.solver_cfg.tolerance) << "\n";
  out << "solver_seed: "
      << (model.solver_cfg.seed ? std::to_string(*model.solver_cfg.seed) : "none") << "\n";
  write_text(path, out.str());
}

ModelFile load_model(const std::string& path) {
  const auto lines = split_lines(read_file(path));
  ModelFile model;
  std::vector<double> coeffs;
  std::size_t declared_coeffs = 0;
  std::size_t declared_dims = 0;

  auto value_of = [](const std::string& line, const std::string& key) -> std::string {
    return line.substr(key.size() + 2);  // skip "key: "
  };
  auto parse_num = [&](const std::string& text, const char* what) {
    double v = 0.0;
    if (!parse_double(text, v)) throw DataError("model '" + path + "': bad " + what);
    return v;
  };

  for (const auto& line : lines) {
    if (line.empty()) continue;
    const auto colon = line.find(": ");
    if (colon == std::string::npos) throw DataError("model '" + path + "': malformed line");
    const std::string key = line.substr(0, colon);
    const std::string value = value_of(line, key);
    if (key == "format_version") {
      model.format_version = static_cast<int>(parse_num(value, "format_version"));
      if (model.format_version != 1) {
        throw DataError("model '" + path + "': unsupported format_version");
      }
    } else if (key == "mode") {
      model.mode = parse_mode(value);
    } else if (key == "k") {
      model.k = static_cast<int>(parse_num(value, "k"));
    } else if (key == "p") {
      model.p = parse_num(value, "p");
    } else if (key == "n") {
      model.degree = static_cast<int>(parse_num(value, "n"));
    } else if (key == "c") {
      model.c = parse_num(value, "c");
    } else if (key == "theorem_variant") {
      model.theorem_variant = value;
    } else if (key == "gamma") {
      model.gamma = parse_num(value, "gamma");
    } else if (key == "transform_dims") {
      declared_dims = static_cast<std::size_t>(parse_num(value, "transform_dims"));
    } else if (key == "transform") {
      std::istringstream ss(value);
      std::size_t d = 0;
      double center = 0.0, halfwidth = 0.0;
      if (!(ss >> d >> center >> halfwidth)) {
        throw DataError("model '" + path + "': malformed transform line");
      }
      model.transform.center.push_back(center);
      model.transform.halfwidth.push_back(halfwidth);
    } else if (key == "coefficient_count") {
      declared_coeffs = static_cast<std::size_t>(parse_num(value, "coefficient_count"));
    } else if (key == "coeff") {
      std::istringstream ss(value);
      int var = 0, power = 0;
      double v = 0.0;
      if (!(ss >> var >> power >> v)) {
        throw DataError("model '" + path + "': malformed coeff line");
      }
      coeffs.push_back(v);
    } else if (key == "input_digest") {
      model.input_digest = value;
    } else if (key == "timestamp") {
      model.timestamp = value;
    } else if (key == "solver_max_iterations") {
      model.solver_cfg.max_iterations = static_cast<int>(parse_num(value, "max_iterations"));
    } else if (key == "solver_tolerance") {
      model.solver_cfg.tolerance = parse_num(value, "tolerance");
    } else if (key == "solver_seed") {
      if (value == "none") {
        model.solver_cfg.seed.reset();
      } else {
        model.solver_cfg.seed = static_cast<std::uint64_t>(parse_num(value, "seed"));
      }
    } else {
      throw DataError("model '" + path + "': unknown key '" + key + "'");
    }
  }

  if (model.transform.dim() != declared_dims) {
    throw DataError("model '" + path + "': transform line count mismatch");
  }
  if (coeffs.size() != declared_coeffs) {
    throw DataError("model '" + path + "': coefficient count mismatch");
  }
  const std::size_t expected =
      1 + static_cast<std::size_t>(model.k) * static_cast<std::size_t>(model.degree);
  if (coeffs.size() != expected) {
    throw DataError("model '" + path + "': coefficient count does not match k and n");
  }
  if (model.mode == Mode::kDistance) {
    model.poly = polynomial::unpack_univariate(coeffs);
  } else {
    model.poly = polynomial::unpack_separable(coeffs, static_cast<std::size_t>(model.k),
                                              model.degree);
  }
  return model;
}

void write_scores(const std::string& path, std::span<const std::string> ids,
                  std::span<const double> original, std::span<const double> fair) {
  std::ostringstream out;
  out << "id,original_score,fair_score\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << ids[i] << "," << format_full(original[i]) << "," << format_full(fair[i]) << "\n";
  }
  write_text(path, out.str());
}

void write_audit_report(const std::string& path, const metrics::AuditReport& report, Mode mode) {
  std::ostringstream out;
  out << "mode,c,total_pairs,violated_pairs,unfairness_pct,max_violation,sampled\n";
  out << to_string(mode) << "," << format_g9(report.c_used) << "," << report.total_pairs << ","
      << report.violated_pairs << "," << format_g9(report.unfairness_pct) << ","
      << format_g9(report.max_violation) << "," << (report.sampled ? 1 : 0) << "\n";
  write_text(path, out.str());
}

void write_fit_report(const std::string& path, const mechanisms::FitReport& report,
                      std::size_t rows) {
  std::ostringstream out;
  out << "mode,k,p,n,c,theorem_variant,rows,fitting_error,unfairness_pct,violated_pairs,"
         "total_pairs,max_violation,iterations,final_cost,converged,rank_deficient\n";
  out << to_string(report.config.mode) << "," << report.config.dimension << ","
      << format_g9(report.config.p) << "," << report.config.degree << ","
      << format_g9(report.config.c) << "," << report.theorem_variant << "," << rows << ","
      << format_g9(report.fit_error) << "," << format_g9(report.audit.unfairness_pct) << ","
      << report.audit.violated_pairs << "," << report.audit.total_pairs << ","
      << format_g9(report.audit.max_violation) << "," << report.solve.iterations << ","
      << format_g9(report.solve.final_objective) << "," << (report.solve.converged ? 1 : 0)
      << "," << (report.solve.rank_deficient ? 1 : 0) << "\n";
  write_text(path, out.str());
}

void write_baseline_report(const std::string& path, const mechanisms::BaselineResult& result,
                           const mechanisms::BaselineParams& params, Mode mode, double c) {
  std::ostringstream out;
  out << "mode,c,threshold,alpha,fitting_error,unfairness_pct,violated_pairs,total_pairs,"
         "max_violation\n";
  out << to_string(mode) << "," << format_g9(c) << "," << format_g9(params.threshold) << ","
      << format_g9(params.alpha) << "," << format_g9(result.fit_error) << ","
      << format_g9(result.audit.unfairness_pct) << "," << result.audit.violated_pairs << ","
      << result.audit.total_pairs << "," << format_g9(result.audit.max_violation) << "\n";
  write_text(path, out.str());
}

void write_sweep_table(const std::string& path, std::span<const mechanisms::SweepRow> rows) {
  std::ostringstream out;
  out << "c,n,unfairness_pct_at_c,unfairness_pct_at_1,fitting_error,solve_time_ms,iterations,"
         "final_cost,converged,status\n";
  for (const auto& row : rows) {
    out << format_g9(row.c) << "," << row.degree << "," << format_g9(row.unfairness_at_c) << ","
        << format_g9(row.unfairness_at_one) << "," << format_g9(row.fit_error) << ","
        << format_g9(row.solve_time_ms) << "," << row.iterations << ","
        << format_g9(row.final_cost) << "," << (row.converged ? 1 : 0) << ","
        << sanitize_field(row.status) << "\n";
  }
  write_text(path, out.str());
}

void write_degree_table(const std::string& path, const mechanisms::DegreeSelection& selection) {
  std::ostringstream out;
  out << "n,skipped,criterion,fitting_error,iterations,converged,selected,note\n";
  for (const auto& row : selection.rows) {
    out << row.degree << "," << (row.skipped ? 1 : 0) << ","
        << (row.skipped ? "" : format_g9(row.criterion)) << ","
        << (row.skipped ? "" : format_g9(row.fit_error)) << "," << row.iterations << ","
        << (row.converged ? 1 : 0) << "," << (row.degree == selection.best_degree ? 1 : 0) << ","
        << sanitize_field(row.note) << "\n";
  }
  write_text(path, out.str());
}

}  // namespace fairpoly::io
