#include "fairpoly/types.hpp"

#include <stdexcept>

namespace fairpoly {

std::string to_string(Mode mode) {
  return mode == Mode::kDistance ? "distance" : "zone";
}

Mode parse_mode(const std::string& text) {
  if (text == "distance") return Mode::kDistance;
  if (text == "zone") return Mode::kZone;
  throw std::invalid_argument("unknown mode '" + text + "' (expected 'distance' or 'zone')");
}

}  // namespace fairpoly
