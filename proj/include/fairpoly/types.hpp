#pragma once

#include <string>

namespace fairpoly {

/// Which similarity distance the fairness constraint is measured against:
/// scalar distance-to-reference values, or raw coordinates under a p-norm.
enum class Mode { kDistance, kZone };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);  // "distance" | "zone"

}  // namespace fairpoly
