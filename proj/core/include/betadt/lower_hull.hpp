#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "betadt/types.hpp"

namespace betadt {

struct LowerHull {
  // Counter-clockwise (in the plane) vertex triples of the downward facets.
  std::vector<std::array<int, 3>> triangles;
  // Sites that are not a vertex of any downward facet.
  std::vector<int> non_vertices;
};

// Lower convex hull of planar sites lifted to (v, |v|^2 + h), by randomized
// incremental construction with conflict lists. `order_seed` fixes the
// insertion order. Throws DegeneracyError if all lifted points are coplanar
// and there are more than three of them.
LowerHull lifted_lower_hull(const std::vector<Site>& sites, std::uint64_t order_seed = 0);

}  // namespace betadt
