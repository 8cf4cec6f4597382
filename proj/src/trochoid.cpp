#include "gearforge/trochoid.hpp"

#include <sstream>

#include "gearforge/acircular.hpp"
#include "gearforge/errors.hpp"

namespace gearforge {
namespace {

constexpr int kCapSegments = 64;  // half of a 128-gon

// Convex hull of the disks of radius `radius` at a and b.
ClosedPolygon capsule(const Point2& a, const Point2& b, double radius) {
  const Point2 dir = b - a;
  const double heading = dir.norm() > kSnapTolerance ? std::atan2(dir.y(), dir.x()) : 0.0;
  Ring ring;
  ring.reserve(2 * (kCapSegments + 1));
  for (int i = 0; i <= kCapSegments; ++i)
    ring.push_back(b + radius * unit_direction(heading - 0.5 * kPi + kPi * i / kCapSegments));
  for (int i = 0; i <= kCapSegments; ++i)
    ring.push_back(a + radius * unit_direction(heading + 0.5 * kPi + kPi * i / kCapSegments));
  return make_polygon(std::move(ring));
}

}  // namespace

double epitrochoid_period(double R, double r) {
  if (!(R > 0.0) || !(r > 0.0)) throw InvalidInput("epitrochoid: R and r must be > 0");
  const Fraction f = rationalize(R / r, 1000, 1e-12);
  if (f.den == 0) throw CycleError("epitrochoid: R/r is not a ratio of small integers");
  return kTwoPi * static_cast<double>(f.den);
}

Ring epitrochoid_ring(double R, double r, double d, int samples) {
  if (d < 0.0) throw InvalidInput("epitrochoid: arm length must be >= 0");
  if (samples < 3) throw InvalidInput("epitrochoid: need >= 3 samples");
  const double period = epitrochoid_period(R, r);
  Ring ring;
  ring.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i)
    ring.push_back(epitrochoid(R, r, d, period * i / samples));
  return ring;
}

ClosedPolygon groove_band(const Polyline& center_curve, double peg_radius) {
  if (!(peg_radius > kSnapTolerance)) {
    std::ostringstream msg;
    msg << "groove_band: peg radius " << peg_radius << " below snap tolerance";
    throw InvalidInput(msg.str());
  }
  const auto& pts = center_curve.points();
  std::vector<ClosedPolygon> pieces;
  pieces.reserve(pts.size());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    pieces.push_back(capsule(pts[i], pts[i + 1], peg_radius));
  PolygonSet band = union_all(pieces);
  if (band.size() != 1) {
    std::ostringstream msg;
    msg << "groove_band: union has " << band.size() << " components";
    throw ResolutionError(msg.str());
  }
  return std::move(band.front());
}

}  // namespace gearforge
