#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gearforge/geometry.hpp"
#include "gearforge/involute.hpp"
#include "gearforge/polygon.hpp"

namespace gearforge {

using Point3 = Eigen::Vector3d;
using Triangle = std::array<std::uint32_t, 3>;

// Closed triangle mesh, counterclockwise (outward) winding.
struct SolidMesh {
  std::vector<Point3> vertices;
  std::vector<Triangle> triangles;
};

struct ExtrudeStyle {
  enum class Kind { Spur, Helical, Herringbone, Bevel };
  Kind kind = Kind::Spur;
  double twist = 0.0;        // radians over the full thickness (helical rate)
  double apex_height = 0.0;  // bevel only

  static ExtrudeStyle spur() { return {}; }
  static ExtrudeStyle helical(double twist) { return {Kind::Helical, twist, 0.0}; }
  static ExtrudeStyle herringbone(double twist) { return {Kind::Herringbone, twist, 0.0}; }
  static ExtrudeStyle bevel(double apex_height) { return {Kind::Bevel, 0.0, apex_height}; }
};

// Sweep the profile from z = 0 to z = thickness.
// helical: slice at z turned by twist*z/thickness.
// herringbone: same helix rate, handedness flips at the mid-plane.
// bevel: slice at z scaled about the axis by (apex - z)/apex.
SolidMesh extrude(const ClosedPolygon& profile, double thickness,
                  const ExtrudeStyle& style = {});
SolidMesh extrude(const GearProfile& profile, double thickness,
                  const ExtrudeStyle& style = {});

// Number of z-intervals used for a style (4 per degree of twist, >= 2 when
// twisted or coned, even for herringbone).
int slice_count(const ExtrudeStyle& style);

// Triangles over the polygon's vertices, numbered outer ring first, then
// each hole in order. Ear clipping with holes bridged to the outer ring.
std::vector<Triangle> triangulate(const ClosedPolygon& polygon);

// Every undirected edge used once in each direction, no triangle below
// 1e-12 mm^2, positive volume.
bool is_watertight(const SolidMesh& mesh);
// Throws InvalidInput naming the first violated invariant.
void validate(const SolidMesh& mesh);
// Signed volume (divergence theorem).
double volume(const SolidMesh& mesh);

// Binary STL; returns bytes written (84 + 50 * triangles).
std::size_t write_stl(const SolidMesh& mesh, std::ostream& out);
std::size_t write_stl(const SolidMesh& mesh, const std::string& path);
// Reads binary STL, welding bit-identical vertices.
SolidMesh read_stl(std::istream& in);

struct SvgStyle {
  std::string fill = "#d0d0d0";
  std::string stroke = "#000000";
  double stroke_width = 0.1;
};

struct SvgItem {
  ClosedPolygon polygon;
  RigidPose pose;
  SvgStyle style;
};

// One <path> per polygon (one subpath per ring, even-odd fill), millimetre
// units, y pointing down, viewBox = bounds plus 5% per side.
std::size_t write_svg(std::span<const SvgItem> items, std::ostream& out);
std::size_t write_svg(std::span<const SvgItem> items, const std::string& path);

}  // namespace gearforge
