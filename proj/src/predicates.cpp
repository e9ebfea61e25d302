#include "terrakit/predicates.hpp"

#include <cmath>
#include <limits>

#include <gmpxx.h>

namespace terrakit::predicates {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon() / 2.0;  // 2^-53
constexpr double kOrientBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kInCircleBound = (10.0 + 96.0 * kEps) * kEps;

double sign_of(const mpq_class& v) { return static_cast<double>(sgn(v)); }

double orient2d_exact(double ax, double ay, double bx, double by, double cx, double cy) {
  const mpq_class acx = mpq_class(ax) - cx, bcx = mpq_class(bx) - cx;
  const mpq_class acy = mpq_class(ay) - cy, bcy = mpq_class(by) - cy;
  return sign_of(acx * bcy - acy * bcx);
}

double incircle_exact(double ax, double ay, double bx, double by, double cx, double cy,
                      double dx, double dy) {
  const mpq_class adx = mpq_class(ax) - dx, ady = mpq_class(ay) - dy;
  const mpq_class bdx = mpq_class(bx) - dx, bdy = mpq_class(by) - dy;
  const mpq_class cdx = mpq_class(cx) - dx, cdy = mpq_class(cy) - dy;
  const mpq_class alift = adx * adx + ady * ady;
  const mpq_class blift = bdx * bdx + bdy * bdy;
  const mpq_class clift = cdx * cdx + cdy * cdy;
  const mpq_class det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                        clift * (adx * bdy - bdx * ady);
  return sign_of(det);
}

}  // namespace

double orient2d(double ax, double ay, double bx, double by, double cx, double cy) {
  const double left = (ax - cx) * (by - cy);
  const double right = (ay - cy) * (bx - cx);
  const double det = left - right;
  double detsum;
  if (left > 0.0) {
    if (right <= 0.0) return det;
    detsum = left + right;
  } else if (left < 0.0) {
    if (right >= 0.0) return det;
    detsum = -left - right;
  } else {
    return orient2d_exact(ax, ay, bx, by, cx, cy);
  }
  if (std::abs(det) > kOrientBound * detsum) return det;
  return orient2d_exact(ax, ay, bx, by, cx, cy);
}

double incircle(double ax, double ay, double bx, double by, double cx, double cy, double dx,
                double dy) {
  const double adx = ax - dx, bdx = bx - dx, cdx = cx - dx;
  const double ady = ay - dy, bdy = by - dy, cdy = cy - dy;

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double alift = adx * adx + ady * ady;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double blift = bdx * bdx + bdy * bdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double clift = cdx * cdx + cdy * cdy;

  const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
                     clift * (adxbdy - bdxady);
  const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                           (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                           (std::abs(adxbdy) + std::abs(bdxady)) * clift;
  if (std::abs(det) > kInCircleBound * permanent) return det;
  return incircle_exact(ax, ay, bx, by, cx, cy, dx, dy);
}

}  // namespace terrakit::predicates
