#include "gearforge/polygon.hpp"

#define BOOST_GEOMETRY_NO_ROBUSTNESS
#include <boost/geometry.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

#include <algorithm>
#include <limits>
#include <string>

#include "gearforge/errors.hpp"

namespace bg = boost::geometry;

namespace gearforge {
namespace {

using BPoint = bg::model::d2::point_xy<double>;
using BPolygon = bg::model::polygon<BPoint, /*ClockWise=*/false,
                                    /*Closed=*/true>;
using BMulti = bg::model::multi_polygon<BPolygon>;
using BRing = BPolygon::ring_type;

double ring_perimeter(const Ring& ring) {
  double sum = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i)
    sum += (ring[(i + 1) % ring.size()] - ring[i]).norm();
  return sum;
}

// Area below which a ring is a sliver no wider than the snap tolerance.
bool degenerate(const Ring& ring) {
  if (ring.size() < 3) return true;
  return std::abs(signed_area(ring)) <= kSnapTolerance * ring_perimeter(ring);
}

BRing to_boost(const Ring& ring) {
  BRing out;
  out.reserve(ring.size() + 1);
  for (const auto& p : ring) out.emplace_back(p.x(), p.y());
  out.emplace_back(ring.front().x(), ring.front().y());
  return out;
}

BPolygon to_boost(const ClosedPolygon& polygon) {
  BPolygon out;
  out.outer() = to_boost(polygon.outer);
  for (const auto& h : polygon.holes) out.inners().push_back(to_boost(h));
  return out;
}

// Open ring with near-coincident vertices welded.
Ring from_boost(const BRing& ring) {
  Ring out;
  out.reserve(ring.size());
  for (const auto& p : ring) {
    Point2 q(p.x(), p.y());
    if (!out.empty() && (q - out.back()).norm() <= kSnapTolerance) continue;
    out.push_back(q);
  }
  while (out.size() > 1 && (out.front() - out.back()).norm() <= kSnapTolerance)
    out.pop_back();
  return out;
}

PolygonSet from_boost(const BMulti& multi) {
  PolygonSet set;
  for (const auto& poly : multi) {
    ClosedPolygon cp;
    cp.outer = from_boost(poly.outer());
    if (degenerate(cp.outer)) continue;
    for (const auto& inner : poly.inners()) {
      Ring h = from_boost(inner);
      if (!degenerate(h)) cp.holes.push_back(std::move(h));
    }
    set.push_back(std::move(cp));
  }
  return set;
}

void check_input(const ClosedPolygon& polygon) {
  if (degenerate(polygon.outer))
    throw InvalidInput("polygon boolean: degenerate outer ring");
  for (const auto& h : polygon.holes)
    if (degenerate(h)) throw InvalidInput("polygon boolean: degenerate hole");
}

BMulti union_pair(const BMulti& a, const BMulti& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  BMulti out;
  bg::union_(a, b, out);
  return out;
}

BMulti reduce_union(std::vector<BMulti> level) {
  if (level.empty()) return {};
  while (level.size() > 1) {
    std::vector<BMulti> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2)
      next.push_back(union_pair(level[i], level[i + 1]));
    if (level.size() % 2 == 1) next.push_back(std::move(level.back()));
    level = std::move(next);
  }
  return std::move(level.front());
}

// A set whose members may overlap, merged into a valid multipolygon.
BMulti normalized(const PolygonSet& set) {
  std::vector<BMulti> parts;
  parts.reserve(set.size());
  for (const auto& p : set) {
    check_input(p);
    BMulti m;
    m.push_back(to_boost(p));
    parts.push_back(std::move(m));
  }
  if (parts.size() == 1) return parts.front();
  return reduce_union(std::move(parts));
}

template <typename Fn>
auto guarded(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const GearError&) {
    throw;
  } catch (const std::exception& e) {
    throw ResolutionError(std::string(what) + ": " + e.what());
  }
}

bool point_in_ring(const Point2& p, const Ring& ring) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2& a = ring[i];
    const Point2& b = ring[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace

ClosedPolygon make_polygon(Ring outer, std::vector<Ring> holes) {
  if (signed_area(outer) < 0.0) std::reverse(outer.begin(), outer.end());
  for (auto& h : holes)
    if (signed_area(h) > 0.0) std::reverse(h.begin(), h.end());
  return ClosedPolygon{std::move(outer), std::move(holes)};
}

double area(const ClosedPolygon& polygon) {
  double a = signed_area(polygon.outer);
  for (const auto& h : polygon.holes) a += signed_area(h);
  return a;
}

double area(const PolygonSet& set) {
  double a = 0.0;
  for (const auto& p : set) a += area(p);
  return a;
}

double perimeter(const ClosedPolygon& polygon) {
  double p = ring_perimeter(polygon.outer);
  for (const auto& h : polygon.holes) p += ring_perimeter(h);
  return p;
}

std::size_t vertex_count(const ClosedPolygon& polygon) {
  std::size_t n = polygon.outer.size();
  for (const auto& h : polygon.holes) n += h.size();
  return n;
}

void validate(const ClosedPolygon& polygon) {
  for (const auto& p : polygon.outer)
    if (!p.allFinite()) throw InvalidInput("polygon: non-finite vertex");
  if (degenerate(polygon.outer)) throw InvalidInput("polygon: degenerate outer ring");
  if (signed_area(polygon.outer) <= 0.0)
    throw InvalidInput("polygon: outer ring must be counterclockwise");
  for (const auto& h : polygon.holes) {
    if (degenerate(h)) throw InvalidInput("polygon: degenerate hole");
    if (signed_area(h) >= 0.0)
      throw InvalidInput("polygon: holes must be clockwise");
  }
  std::string reason;
  if (!bg::is_valid(to_boost(polygon), reason))
    throw InvalidInput("polygon: " + reason);
}

bool is_simple(const ClosedPolygon& polygon) {
  try {
    validate(polygon);
    return true;
  } catch (const InvalidInput&) {
    return false;
  }
}

bool contains(const ClosedPolygon& polygon, const Point2& p) {
  if (!point_in_ring(p, polygon.outer)) return false;
  for (const auto& h : polygon.holes)
    if (point_in_ring(p, h)) return false;
  return true;
}

double boundary_distance(const ClosedPolygon& polygon, const Point2& p) {
  double d = distance_to_ring(p, polygon.outer);
  for (const auto& h : polygon.holes) d = std::min(d, distance_to_ring(p, h));
  return d;
}

ClosedPolygon transformed(const ClosedPolygon& polygon, const RigidPose& pose) {
  ClosedPolygon out;
  out.outer = transformed(polygon.outer, pose);
  for (const auto& h : polygon.holes) out.holes.push_back(transformed(h, pose));
  return out;
}

ClosedPolygon scaled(const ClosedPolygon& polygon, double factor) {
  ClosedPolygon out = polygon;
  for (auto& p : out.outer) p *= factor;
  for (auto& h : out.holes)
    for (auto& p : h) p *= factor;
  return out;
}

Ring circle_ring(const Point2& center, double radius, int segments,
                 double phase) {
  Ring ring;
  ring.reserve(static_cast<std::size_t>(segments));
  for (int k = 0; k < segments; ++k)
    ring.push_back(center +
                   radius * unit_direction(phase + kTwoPi * k / segments));
  return ring;
}

PolygonSet polygon_boolean(BooleanOp op, const PolygonSet& a,
                           const PolygonSet& b) {
  return guarded("polygon_boolean", [&] {
    const BMulti ma = normalized(a);
    const BMulti mb = normalized(b);
    BMulti out;
    switch (op) {
      case BooleanOp::Union:
        out = union_pair(ma, mb);
        break;
      case BooleanOp::Difference:
        if (mb.empty())
          out = ma;
        else if (!ma.empty())
          bg::difference(ma, mb, out);
        break;
      case BooleanOp::Intersection:
        if (!ma.empty() && !mb.empty()) bg::intersection(ma, mb, out);
        break;
    }
    return from_boost(out);
  });
}

PolygonSet union_all(std::span<const ClosedPolygon> polygons) {
  return guarded("union_all", [&] {
    std::vector<BMulti> parts;
    parts.reserve(polygons.size());
    for (const auto& p : polygons) {
      check_input(p);
      BMulti m;
      m.push_back(to_boost(p));
      parts.push_back(std::move(m));
    }
    return from_boost(reduce_union(std::move(parts)));
  });
}

PolygonSet offset(const PolygonSet& set, double delta, int points_per_circle) {
  if (delta == 0.0) return set;
  return guarded("offset", [&] {
    const BMulti in = normalized(set);
    BMulti out;
    bg::strategy::buffer::distance_symmetric<double> distance(delta);
    bg::strategy::buffer::join_round join(
        static_cast<std::size_t>(std::max(points_per_circle, 8)));
    bg::strategy::buffer::end_flat end;
    bg::strategy::buffer::point_circle circle(
        static_cast<std::size_t>(std::max(points_per_circle, 8)));
    bg::strategy::buffer::side_straight side;
    bg::buffer(in, out, distance, side, join, end, circle);
    return from_boost(out);
  });
}

Ring remove_collinear(const Ring& ring, double angle_tol) {
  Ring out(ring);
  bool changed = true;
  while (changed && out.size() > 3) {
    changed = false;
    Ring next;
    next.reserve(out.size());
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point2& prev = next.empty() ? out[(i + n - 1) % n] : next.back();
      const Point2& cur = out[i];
      const Point2& nxt = out[(i + 1) % n];
      const Point2 u = cur - prev, v = nxt - cur;
      const double turn = std::atan2(cross<double>(u, v), u.dot(v));
      if (std::abs(turn) < angle_tol && n - (i - next.size()) > 3) {
        changed = true;
        continue;
      }
      next.push_back(cur);
    }
    out = std::move(next);
  }
  return out;
}

ClosedPolygon remove_collinear(const ClosedPolygon& polygon, double angle_tol) {
  ClosedPolygon out;
  out.outer = remove_collinear(polygon.outer, angle_tol);
  for (const auto& h : polygon.holes)
    out.holes.push_back(remove_collinear(h, angle_tol));
  return out;
}

double inradius(const PolygonSet& set, double rel_tol) {
  if (set.empty()) return 0.0;
  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_y = min_x, max_y = -min_x;
  for (const auto& p : set)
    for (const auto& v : p.outer) {
      min_x = std::min(min_x, v.x());
      max_x = std::max(max_x, v.x());
      min_y = std::min(min_y, v.y());
      max_y = std::max(max_y, v.y());
    }
  double lo = 0.0;
  double hi = 0.5 * std::min(max_x - min_x, max_y - min_y) + kSnapTolerance;
  const double resolution =
      std::max(rel_tol * std::max(max_x - min_x, max_y - min_y), kSnapTolerance);
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    if (area(offset(set, -mid, 16)) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace gearforge
