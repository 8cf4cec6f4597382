#pragma once

#include <span>
#include <vector>

#include "gearforge/geometry.hpp"

namespace gearforge {

// Outer ring counterclockwise, holes clockwise. Rings are stored open (the
// closing edge back to the first vertex is implicit).
struct ClosedPolygon {
  Ring outer;
  std::vector<Ring> holes;
};

using PolygonSet = std::vector<ClosedPolygon>;

enum class BooleanOp { Union, Difference, Intersection };

// Orient a simple ring as an outer boundary (counterclockwise).
ClosedPolygon make_polygon(Ring outer, std::vector<Ring> holes = {});

double area(const ClosedPolygon& polygon);
double area(const PolygonSet& set);
double perimeter(const ClosedPolygon& polygon);
std::size_t vertex_count(const ClosedPolygon& polygon);

// Throws InvalidInput if a ring is degenerate, wrongly oriented,
// self-intersecting, or a hole escapes the outer ring.
void validate(const ClosedPolygon& polygon);
bool is_simple(const ClosedPolygon& polygon);

bool contains(const ClosedPolygon& polygon, const Point2& p);
// Distance from p to the nearest boundary ring.
double boundary_distance(const ClosedPolygon& polygon, const Point2& p);

ClosedPolygon transformed(const ClosedPolygon& polygon, const RigidPose& pose);
ClosedPolygon scaled(const ClosedPolygon& polygon, double factor);

// Regular n-gon inscribed in the circle (center, radius), first vertex at
// angle `phase`.
Ring circle_ring(const Point2& center, double radius, int segments,
                 double phase = 0.0);

// Boolean of two polygon sets; the result satisfies the ClosedPolygon
// invariants, with vertices closer than kSnapTolerance welded.
PolygonSet polygon_boolean(BooleanOp op, const PolygonSet& a,
                           const PolygonSet& b);

// Union of many polygons by pairwise reduction in a fixed order, so the
// result does not depend on scheduling.
PolygonSet union_all(std::span<const ClosedPolygon> polygons);

// Outward (delta > 0) or inward (delta < 0) offset with round joins,
// `points_per_circle` segments for a full turn of arc.
PolygonSet offset(const PolygonSet& set, double delta,
                  int points_per_circle = 64);

// Remove vertices whose turn angle is below `angle_tol` radians.
Ring remove_collinear(const Ring& ring, double angle_tol);
ClosedPolygon remove_collinear(const ClosedPolygon& polygon, double angle_tol);

// Radius of the largest disk inside the set, found by bisection on inward
// offsets. Resolution limited by `rel_tol` of the set's extent.
double inradius(const PolygonSet& set, double rel_tol = 1e-4);

}  // namespace gearforge
