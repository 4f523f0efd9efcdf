#pragma once

#include <span>
#include <vector>

#include "shocklab/geometry.hpp"

namespace shocklab::detail {

struct AreaCentroid {
  double area;
  Vec2 centroid;
};

/// Signed area (positive for counter-clockwise) and centroid, taken about the first vertex.
inline AreaCentroid polygon_area_centroid(std::span<const Vec2> nodes, std::span<const int> poly) {
  const Vec2 o = nodes[poly[0]];
  double twice_area = 0.0;
  Vec2 moment;
  for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
    const Vec2 a = nodes[poly[k]] - o;
    const Vec2 b = nodes[poly[k + 1]] - o;
    const double w = cross(a, b);
    twice_area += w;
    moment += w * (a + b);
  }
  const double area = 0.5 * twice_area;
  const Vec2 c = twice_area != 0.0 ? (1.0 / (3.0 * twice_area)) * moment : Vec2{};
  return {area, o + c};
}

}  // namespace shocklab::detail
