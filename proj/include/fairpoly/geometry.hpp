#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fairpoly::geometry {

struct SpatialPoint {
  std::vector<double> coords;

  std::size_t dim() const { return coords.size(); }
};

/// Normalized distances to a reference point. Every entry lies in [0,1] and
/// the farthest point maps to exactly 1; gamma is the raw distance it had.
struct DtRVector {
  std::vector<double> distances;
  double gamma = 0.0;
  double p = 2.0;

  std::size_t size() const { return distances.size(); }
};

/// Per-dimension affine map onto [-1,1]. A degenerate dimension (constant
/// column, halfwidth 0) maps to 0 and inverts back to its center.
struct AffineTransform {
  std::vector<double> center;
  std::vector<double> halfwidth;

  std::size_t dim() const { return center.size(); }
  bool degenerate(std::size_t d) const { return halfwidth[d] == 0.0; }
  double to_normalized(double x, std::size_t d) const;
  double from_normalized(double u, std::size_t d) const;
  SpatialPoint apply(const SpatialPoint& p) const;
  SpatialPoint invert(const SpatialPoint& p) const;

  static AffineTransform identity(std::size_t k);
};

/// Minkowski distance of order p >= 1 between equal-dimension points.
double minkowski_distance(const SpatialPoint& a, const SpatialPoint& b, double p);

/// Distance-to-reference column: raw p-norm distances divided by their
/// maximum gamma. Throws if every point coincides with the reference.
DtRVector compute_dtr(std::span<const SpatialPoint> points, const SpatialPoint& reference,
                      double p);

struct NormalizedPoints {
  std::vector<SpatialPoint> points;
  AffineTransform transform;
};

/// Per-dimension affine normalization onto [-1,1]; the returned transform is
/// reusable on future query points.
NormalizedPoints normalize_coords(std::span<const SpatialPoint> points);

/// Column-major view of a point list (one vector per dimension).
std::vector<std::vector<double>> to_columns(std::span<const SpatialPoint> points);

}  // namespace fairpoly::geometry
