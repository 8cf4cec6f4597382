#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "gearforge/alien.hpp"
#include "gearforge/errors.hpp"
#include "gearforge/solidify.hpp"
#include "gearforge/toothing.hpp"
#include "gearforge/trochoid.hpp"

using namespace gearforge;

namespace {

ClosedPolygon unit_square() { return make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

ClosedPolygon square_with_hole() {
  return make_polygon({{0, 0}, {4, 0}, {4, 4}, {0, 4}}, {{{1, 1}, {1, 3}, {3, 3}, {3, 1}}});
}

// Independent volume: signed tetrahedra against a far reference point.
double tetra_volume(const SolidMesh& mesh) {
  const Point3 ref(7.0, -3.0, 11.0);
  double sum = 0.0;
  for (const auto& t : mesh.triangles) {
    const Point3 a = mesh.vertices[t[0]] - ref;
    const Point3 b = mesh.vertices[t[1]] - ref;
    const Point3 c = mesh.vertices[t[2]] - ref;
    sum += a.cross(b).dot(c);
  }
  return sum / 6.0;
}

std::vector<ClosedPolygon> corpus() {
  std::vector<ClosedPolygon> out;
  GearSpec spur;
  spur.teeth = 20;
  spur.module = 2.0;
  out.push_back(make_spur_profile(spur).boundary);
  spur.teeth = 8;
  out.push_back(make_spur_profile(spur).boundary);
  spur.teeth = 31;
  spur.module = 1.0;
  out.push_back(make_trapezoid_profile(spur).boundary);
  RackSpec rack;
  rack.module = 2.0;
  out.push_back(cut_teeth(PolarCurve::sample([](double) { return 12.0; }, 1024), rack, 16).boundary);
  out.push_back(square_with_hole());
  out.push_back(groove_band(Polyline({{0, 0}, {3, 1}, {5, -1}, {8, 0}}), 0.4));
  Ring blob;
  for (int i = 0; i < 120; ++i) {
    const double t = kTwoPi * i / 120;
    blob.push_back((1.0 + 0.25 * std::cos(3 * t)) * unit_direction(t));
  }
  out.push_back(carve_conjugate(make_polygon(blob), {0, 0}, {2.4, 0}, 1.0, {180}));
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Compares against a checked-in golden; GEARFORGE_UPDATE_GOLDENS=1 rewrites it.
void expect_golden(const std::string& name, const std::string& bytes) {
  const std::string path = std::string(GEARFORGE_FIXTURES) + "/" + name;
  if (std::getenv("GEARFORGE_UPDATE_GOLDENS")) {
    std::ofstream(path, std::ios::binary) << bytes;
  }
  const std::string want = slurp(path);
  ASSERT_FALSE(want.empty()) << "missing golden " << path;
  EXPECT_TRUE(want == bytes) << "output differs from " << path;
}

}  // namespace

TEST(Triangulate, SquareAndHole) {
  EXPECT_EQ(triangulate(unit_square()).size(), 2u);
  const auto holed = square_with_hole();
  const auto tris = triangulate(holed);
  EXPECT_EQ(tris.size(), 8u + 2u * 1u - 2u);  // n + 2h - 2 for n = 8, h = 1
  std::vector<Point2> pts(holed.outer.begin(), holed.outer.end());
  pts.insert(pts.end(), holed.holes[0].begin(), holed.holes[0].end());
  double sum = 0.0;
  for (const auto& t : tris) sum += 0.5 * cross<double>(pts[t[1]] - pts[t[0]], pts[t[2]] - pts[t[0]]);
  EXPECT_NEAR(sum, 12.0, 1e-12);
}

TEST(Triangulate, GearCapAreaMatchesPolygon) {
  for (const auto& poly : corpus()) {
    std::vector<Point2> pts(poly.outer.begin(), poly.outer.end());
    for (const auto& h : poly.holes) pts.insert(pts.end(), h.begin(), h.end());
    double sum = 0.0;
    for (const auto& t : triangulate(poly)) {
      const double a = 0.5 * cross<double>(pts[t[1]] - pts[t[0]], pts[t[2]] - pts[t[0]]);
      EXPECT_GT(a, 0.0);
      sum += a;
    }
    EXPECT_NEAR(sum, area(poly), 1e-9 * area(poly));
  }
}

TEST(Extrude, UnitSquareCuboid) {
  const auto mesh = extrude(unit_square(), 1.0);
  EXPECT_EQ(mesh.triangles.size(), 12u);
  EXPECT_TRUE(is_watertight(mesh));
  EXPECT_NEAR(volume(mesh), 1.0, 1e-15);
}

TEST(Extrude, HelicalWithoutTwistIsSpur) {
  const auto gear = corpus().front();
  const auto spur = extrude(gear, 5.0);
  const auto helical = extrude(gear, 5.0, ExtrudeStyle::helical(0.0));
  ASSERT_EQ(spur.vertices.size(), helical.vertices.size());
  for (std::size_t i = 0; i < spur.vertices.size(); ++i)
    EXPECT_EQ(spur.vertices[i], helical.vertices[i]);
}

TEST(Extrude, FrustumVolume) {
  const auto disk = make_polygon(circle_ring(Point2::Zero(), 1.0, 1024));
  const auto mesh = extrude(disk, 1.0, ExtrudeStyle::bevel(2.0));
  EXPECT_TRUE(is_watertight(mesh));
  const double analytic = kPi * (1.0 + 0.5 + 0.25) / 3.0;
  EXPECT_NEAR(tetra_volume(mesh), analytic, 1e-3 * analytic);
  EXPECT_NEAR(volume(mesh), tetra_volume(mesh), 1e-12);
}

TEST(Extrude, AllStylesWatertightOnCorpus) {
  const std::vector<ExtrudeStyle> styles = {
      ExtrudeStyle::spur(), ExtrudeStyle::helical(0.15), ExtrudeStyle::herringbone(-0.2),
      ExtrudeStyle::bevel(40.0)};
  int index = 0;
  for (const auto& poly : corpus()) {
    for (const auto& style : styles) {
      const auto mesh = extrude(poly, 6.0, style);
      EXPECT_TRUE(is_watertight(mesh)) << "profile " << index << " style "
                                       << static_cast<int>(style.kind);
      EXPECT_NO_THROW(validate(mesh));
    }
    ++index;
  }
}

TEST(Extrude, SpurVolumeIsAreaTimesThickness) {
  for (const auto& poly : corpus()) {
    const auto mesh = extrude(poly, 3.5);
    const double want = area(poly) * 3.5;
    EXPECT_NEAR(volume(mesh), want, 1e-9 * want);
  }
}

TEST(Extrude, TwistPreservesVolume) {
  const auto gear = corpus().front();
  const double flat = volume(extrude(gear, 8.0));
  // Twisted wall quads are split along one diagonal, so the solid is only
  // approximately the exact helicoid.
  EXPECT_NEAR(volume(extrude(gear, 8.0, ExtrudeStyle::helical(0.5))), flat, 1e-4 * flat);
}

TEST(Extrude, HerringboneMirrorSymmetry) {
  const double t = 6.0;
  const auto mesh = extrude(corpus().front(), t, ExtrudeStyle::herringbone(0.35));
  std::set<std::array<long long, 3>> keys;
  auto key = [](const Point3& p) {
    return std::array<long long, 3>{std::llround(p.x() * 1e6), std::llround(p.y() * 1e6),
                                    std::llround(p.z() * 1e6)};
  };
  for (const auto& v : mesh.vertices) keys.insert(key(v));
  for (const auto& v : mesh.vertices) {
    ASSERT_TRUE(keys.count(key(Point3(v.x(), v.y(), t - v.z())))) << v.transpose();
  }
}

TEST(Extrude, SliceCounts) {
  EXPECT_EQ(slice_count(ExtrudeStyle::spur()), 1);
  EXPECT_EQ(slice_count(ExtrudeStyle::helical(kPi / 180.0)), 4);
  EXPECT_EQ(slice_count(ExtrudeStyle::helical(0.1 * kPi / 180.0)), 2);
  EXPECT_EQ(slice_count(ExtrudeStyle::herringbone(0.75 * kPi / 180.0)), 4);
  EXPECT_EQ(slice_count(ExtrudeStyle::bevel(10.0)), 2);
}

TEST(Extrude, RejectsBadInput) {
  EXPECT_THROW(extrude(unit_square(), 0.0), InvalidInput);
  EXPECT_THROW(extrude(unit_square(), 2.0, ExtrudeStyle::bevel(1.5)), InvalidInput);
  const auto bowtie = ClosedPolygon{{{0, 0}, {1, 1}, {1, 0}, {0, 1}}, {}};
  EXPECT_THROW(extrude(bowtie, 1.0), InvalidInput);
}

TEST(Stl, CuboidSizeAndRoundTrip) {
  const auto mesh = extrude(unit_square(), 1.0);
  std::ostringstream out;
  EXPECT_EQ(write_stl(mesh, out), 684u);
  const std::string bytes = out.str();
  EXPECT_EQ(bytes.size(), 684u);
  std::istringstream in(bytes);
  const auto back = read_stl(in);
  EXPECT_EQ(back.triangles.size(), 12u);
  EXPECT_EQ(back.vertices.size(), 8u);
  EXPECT_TRUE(is_watertight(back));
  for (const auto& t : mesh.triangles)
    for (auto i : t) {
      const Point3& v = mesh.vertices[i];
      bool found = false;
      for (const auto& w : back.vertices)
        found |= (w - v.cast<float>().cast<double>()).norm() == 0.0;
      EXPECT_TRUE(found);
    }
  expect_golden("cuboid.stl", bytes);
}

TEST(Stl, GearSizeFormula) {
  const auto mesh = extrude(corpus().front(), 4.0, ExtrudeStyle::helical(0.2));
  std::ostringstream out;
  const std::size_t n = write_stl(mesh, out);
  EXPECT_EQ(n, 84u + 50u * mesh.triangles.size());
  EXPECT_EQ(out.str().size(), n);
  std::istringstream in(out.str());
  const auto back = read_stl(in);
  EXPECT_EQ(back.triangles.size(), mesh.triangles.size());
  EXPECT_NEAR(volume(back), volume(mesh), 1e-5 * volume(mesh));
}

TEST(Stl, RejectsEmptyMesh) {
  std::ostringstream out;
  EXPECT_THROW(write_stl(SolidMesh{}, out), InvalidInput);
}

TEST(Svg, UnitSquareSinglePath) {
  std::ostringstream out;
  const SvgItem item{unit_square(), {}, {}};
  write_svg(std::span(&item, 1), out);
  const std::string svg = out.str();
  std::size_t paths = 0, pos = 0;
  while ((pos = svg.find("<path", pos)) != std::string::npos) ++paths, ++pos;
  EXPECT_EQ(paths, 1u);
  const auto d0 = svg.find("d=\"") + 3;
  const std::string d = svg.substr(d0, svg.find('"', d0) - d0);
  EXPECT_EQ(std::count(d.begin(), d.end(), 'M'), 1);
  EXPECT_EQ(std::count(d.begin(), d.end(), 'L') + std::count(d.begin(), d.end(), 'Z'), 4);
  EXPECT_NE(svg.find("viewBox=\"-0.050000 -1.050000 1.100000 1.100000\""), std::string::npos);
  EXPECT_NE(svg.find("width=\"1.100000mm\""), std::string::npos);
}

TEST(Svg, HoleIsSecondSubpath) {
  std::ostringstream out;
  const SvgItem item{square_with_hole(), {}, {}};
  write_svg(std::span(&item, 1), out);
  const std::string svg = out.str();
  EXPECT_EQ(std::count(svg.begin(), svg.end(), 'M'), 2);
  EXPECT_NE(svg.find("fill-rule=\"evenodd\""), std::string::npos);
}

TEST(Svg, GearGoldenFile) {
  GearSpec spec;
  spec.teeth = 20;
  spec.module = 2.0;
  const SvgItem item{make_spur_profile(spec).boundary, {}, {}};
  std::ostringstream a, b;
  write_svg(std::span(&item, 1), a);
  write_svg(std::span(&item, 1), b);
  EXPECT_EQ(a.str(), b.str());
  expect_golden("spur_n20_m2.svg", a.str());
}
