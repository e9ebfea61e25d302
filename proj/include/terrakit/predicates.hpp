#pragma once

namespace terrakit::predicates {

/**
 * Sign-exact geometric predicates.
 *
 * Each test first evaluates in double precision with a forward error bound
 * (the classic Shewchuk stage-A bounds); only when the result is too close to
 * zero to trust is it recomputed in exact rational arithmetic. The sign is
 * therefore always correct, and the returned magnitude is only meaningful
 * as a sign carrier.
 */

/// > 0 if (a, b, c) turn counter-clockwise, < 0 clockwise, 0 if collinear.
double orient2d(double ax, double ay, double bx, double by, double cx, double cy);

/// > 0 if d lies strictly inside the circle through CCW (a, b, c), < 0 outside,
/// 0 if cocircular.
double incircle(double ax, double ay, double bx, double by, double cx, double cy,
                double dx, double dy);

template <class P>
int orientation(const P& a, const P& b, const P& c) {
  const double d = orient2d(a.x, a.y, b.x, b.y, c.x, c.y);
  return (d > 0) - (d < 0);
}

template <class P>
int in_circle(const P& a, const P& b, const P& c, const P& d) {
  const double v = incircle(a.x, a.y, b.x, b.y, c.x, c.y, d.x, d.y);
  return (v > 0) - (v < 0);
}

}  // namespace terrakit::predicates
