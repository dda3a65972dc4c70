#pragma once

#include "serpent/se2.hpp"

namespace serpent::predicates {

// Sign-exact geometric predicates. A floating-point evaluation is accepted when
// it clears a forward error bound; otherwise the determinant is recomputed in
// exact rational arithmetic.

/// +1 if c is left of a->b, -1 if right, 0 if collinear.
int orient2d(const Point& a, const Point& b, const Point& c);

/// +1 if d is strictly inside the circle through CCW triangle (a, b, c), -1 outside, 0 on it.
int incircle(const Point& a, const Point& b, const Point& c, const Point& d);

}  // namespace serpent::predicates
