#include "fairpoly/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fairpoly::geometry {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace

double AffineTransform::to_normalized(double x, std::size_t d) const {
  return degenerate(d) ? 0.0 : (x - center[d]) / halfwidth[d];
}

double AffineTransform::from_normalized(double u, std::size_t d) const {
  return center[d] + halfwidth[d] * u;
}

SpatialPoint AffineTransform::apply(const SpatialPoint& p) const {
  require(p.dim() == dim(), "transform/point dimension mismatch");
  SpatialPoint out;
  out.coords.resize(p.dim());
  for (std::size_t d = 0; d < p.dim(); ++d) out.coords[d] = to_normalized(p.coords[d], d);
  return out;
}

SpatialPoint AffineTransform::invert(const SpatialPoint& p) const {
  require(p.dim() == dim(), "transform/point dimension mismatch");
  SpatialPoint out;
  out.coords.resize(p.dim());
  for (std::size_t d = 0; d < p.dim(); ++d) out.coords[d] = from_normalized(p.coords[d], d);
  return out;
}

AffineTransform AffineTransform::identity(std::size_t k) {
  AffineTransform t;
  t.center.assign(k, 0.0);
  t.halfwidth.assign(k, 1.0);
  return t;
}

double minkowski_distance(const SpatialPoint& a, const SpatialPoint& b, double p) {
  require(a.dim() == b.dim(), "minkowski_distance: dimension mismatch");
  require(a.dim() >= 1, "minkowski_distance: empty points");
  require(std::isfinite(p) && p >= 1.0, "minkowski_distance: norm order must be >= 1");
  if (p == 1.0) {
    double sum = 0.0;
    for (std::size_t d = 0; d < a.dim(); ++d) sum += std::fabs(a.coords[d] - b.coords[d]);
    return sum;
  }
  if (p == 2.0) {
    double sum = 0.0;
    for (std::size_t d = 0; d < a.dim(); ++d) {
      const double dx = a.coords[d] - b.coords[d];
      sum += dx * dx;
    }
    return std::sqrt(sum);
  }
  double sum = 0.0;
  for (std::size_t d = 0; d < a.dim(); ++d) {
    sum += std::pow(std::fabs(a.coords[d] - b.coords[d]), p);
  }
  return std::pow(sum, 1.0 / p);
}

DtRVector compute_dtr(std::span<const SpatialPoint> points, const SpatialPoint& reference,
                      double p) {
  require(!points.empty(), "compute_dtr: empty point list");
  DtRVector dtr;
  dtr.p = p;
  dtr.distances.resize(points.size());
  double gamma = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    dtr.distances[i] = minkowski_distance(points[i], reference, p);
    gamma = std::max(gamma, dtr.distances[i]);
  }
  require(gamma > 0.0, "compute_dtr: every point coincides with the reference (gamma = 0)");
  for (double& d : dtr.distances) d /= gamma;
  dtr.gamma = gamma;
  return dtr;
}

NormalizedPoints normalize_coords(std::span<const SpatialPoint> points) {
  require(!points.empty(), "normalize_coords: empty input");
  const std::size_t k = points.front().dim();
  require(k >= 1, "normalize_coords: zero-dimensional points");
  for (const auto& pt : points) {
    require(pt.dim() == k, "normalize_coords: inconsistent dimensions");
  }

  NormalizedPoints out;
  out.transform.center.resize(k);
  out.transform.halfwidth.resize(k);
  for (std::size_t d = 0; d < k; ++d) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& pt : points) {
      lo = std::min(lo, pt.coords[d]);
      hi = std::max(hi, pt.coords[d]);
    }
    out.transform.center[d] = (lo + hi) / 2.0;
    out.transform.halfwidth[d] = (hi - lo) / 2.0;
  }

  out.points.reserve(points.size());
  for (const auto& pt : points) out.points.push_back(out.transform.apply(pt));
  return out;
}

std::vector<std::vector<double>> to_columns(std::span<const SpatialPoint> points) {
  if (points.empty()) return {};
  const std::size_t k = points.front().dim();
  std::vector<std::vector<double>> cols(k, std::vector<double>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    require(points[i].dim() == k, "to_columns: inconsistent dimensions");
    for (std::size_t d = 0; d < k; ++d) cols[d][i] = points[i].coords[d];
  }
  return cols;
}

}  // namespace fairpoly::geometry
