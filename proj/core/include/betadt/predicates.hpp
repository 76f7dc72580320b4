#pragma once

#include <cstdint>

#include "betadt/types.hpp"

namespace betadt {

// Sign predicates on planar sites (v in R^2) lifted to (v, |v|^2 + h).
// A floating-point evaluation is accepted when |det| exceeds 1e-10 times the
// magnitude bound of its terms; otherwise the sign is recomputed exactly with
// rational arithmetic on the input doubles.

// Sign of (b - a) x (c - a): +1 counter-clockwise, -1 clockwise, 0 collinear.
int orient2d(const Site& a, const Site& b, const Site& c);

// Sign of det[B - A; C - A; D - A] for the lifted points.
int orient3d_lifted(const Site& a, const Site& b, const Site& c, const Site& d);

// +1 if q lies strictly inside the downward paraboloid through a, b, c,
// 0 on its boundary, -1 outside. Throws DegeneracyError if a, b, c are
// collinear.
int in_paraboloid(const Site& a, const Site& b, const Site& c, const Site& q);

struct PredicateCounters {
  std::uint64_t filtered = 0;
  std::uint64_t exact = 0;
};

// Per-thread counters of how predicates were decided.
PredicateCounters& predicate_counters();

}  // namespace betadt
