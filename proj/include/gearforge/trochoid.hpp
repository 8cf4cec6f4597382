#pragma once

#include <cmath>

#include "gearforge/geometry.hpp"
#include "gearforge/polygon.hpp"

namespace gearforge {

// Point at distance d from the centre of a circle of radius r rolling
// outside a fixed circle of radius R, after the centre moved by angle t.
template <typename Scalar>
Vec2<Scalar> epitrochoid(Scalar R, Scalar r, Scalar d, Scalar t) {
  using std::cos;
  using std::sin;
  const Scalar k = (R + r) / r;
  return Vec2<Scalar>((R + r) * cos(t) - d * cos(k * t),
                      (R + r) * sin(t) - d * sin(k * t));
}

// Parameter span after which the curve closes: 2 pi times the reduced
// denominator of R/r. Throws CycleError if R/r is not rational.
double epitrochoid_period(double R, double r);

// One closed period at `samples` points; the closing point is not repeated.
Ring epitrochoid_ring(double R, double r, double d, int samples = 1024);

// Points within peg_radius of the path, as a union of capsules (disks swept
// along each segment, 128-gon ends). A closed path yields a band with a hole.
// Throws InvalidInput below the snap tolerance, ResolutionError if the union
// is not a single region.
ClosedPolygon groove_band(const Polyline& center_curve, double peg_radius);

}  // namespace gearforge
