// JSON and DOT forms of plane maps.
#pragma once

#include <string>

#include "pentree/planemap.hpp"

namespace pentree {

std::string map_to_json(const PlaneMap& map, int indent = -1);
PlaneMap map_from_json(const std::string& text);
std::string map_to_dot(const PlaneMap& map);

}  // namespace pentree
