#include <gtest/gtest.h>

#include <cmath>
#include <unordered_map>

#include "gearforge/errors.hpp"
#include "gearforge/trochoid.hpp"

using namespace gearforge;

namespace {

Polyline closed_path(Ring ring) {
  ring.push_back(ring.front());
  return Polyline(std::move(ring));
}

// Pixel-counting area of the set within `radius` of the path. Segments are
// bucketed on a coarse grid so each pixel only checks nearby segments.
double pixel_band_area(const Polyline& path, double radius, double pixel) {
  const auto& pts = path.points();
  double xmin = pts[0].x(), xmax = xmin, ymin = pts[0].y(), ymax = ymin;
  for (const auto& p : pts) {
    xmin = std::min(xmin, p.x()); xmax = std::max(xmax, p.x());
    ymin = std::min(ymin, p.y()); ymax = std::max(ymax, p.y());
  }
  xmin -= radius; ymin -= radius; xmax += radius; ymax += radius;
  const double cell = 2.0 * radius;
  auto key = [&](long i, long j) { return i * 1000003L + j; };
  std::unordered_map<long, std::vector<std::size_t>> buckets;
  for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
    const double bx0 = std::min(pts[s].x(), pts[s + 1].x()) - radius;
    const double bx1 = std::max(pts[s].x(), pts[s + 1].x()) + radius;
    const double by0 = std::min(pts[s].y(), pts[s + 1].y()) - radius;
    const double by1 = std::max(pts[s].y(), pts[s + 1].y()) + radius;
    for (long i = std::lround(std::floor((bx0 - xmin) / cell)); i <= std::lround(std::floor((bx1 - xmin) / cell)); ++i)
      for (long j = std::lround(std::floor((by0 - ymin) / cell)); j <= std::lround(std::floor((by1 - ymin) / cell)); ++j)
        buckets[key(i, j)].push_back(s);
  }
  long hits = 0;
  const long nx = std::lround(std::ceil((xmax - xmin) / pixel));
  const long ny = std::lround(std::ceil((ymax - ymin) / pixel));
  for (long ix = 0; ix < nx; ++ix) {
    for (long iy = 0; iy < ny; ++iy) {
      const Point2 q(xmin + (ix + 0.5) * pixel, ymin + (iy + 0.5) * pixel);
      const auto it = buckets.find(key(std::lround(std::floor((q.x() - xmin) / cell)),
                                       std::lround(std::floor((q.y() - ymin) / cell))));
      if (it == buckets.end()) continue;
      for (std::size_t s : it->second) {
        if (point_segment_distance(q, pts[s], pts[s + 1]) <= radius) {
          ++hits;
          break;
        }
      }
    }
  }
  return hits * pixel * pixel;
}

}  // namespace

TEST(Epitrochoid, NoArmIsCircle) {
  for (double t = 0.0; t < 7.0; t += 0.1)
    EXPECT_NEAR(epitrochoid(2.0, 0.7, 0.0, t).norm(), 2.7, 1e-12);
}

TEST(Epitrochoid, CardioidPoints) {
  const double R = 1.5;
  const auto p0 = epitrochoid(R, R, R, 0.0);
  EXPECT_NEAR(p0.x(), R, 1e-12);
  EXPECT_NEAR(p0.y(), 0.0, 1e-12);
  const auto p1 = epitrochoid(R, R, R, kPi);
  EXPECT_NEAR(p1.x(), -3 * R, 1e-12);
  EXPECT_NEAR(p1.y(), 0.0, 1e-12);
}

TEST(Epitrochoid, LongDoubleInstantiation) {
  const auto p = epitrochoid<long double>(2.0L, 1.0L, 0.5L, 0.3L);
  EXPECT_NEAR(static_cast<double>(p.x()), epitrochoid(2.0, 1.0, 0.5, 0.3).x(), 1e-15);
}

TEST(Epitrochoid, ArmLengthIsConstant) {
  const double R = 3.0, r = 1.0, d = 0.6;
  const double period = epitrochoid_period(R, r);
  for (int i = 0; i <= 4096; ++i) {
    const double t = period * i / 4096;
    const Point2 centre = (R + r) * unit_direction(t);
    ASSERT_NEAR((epitrochoid(R, r, d, t) - centre).norm(), d, 1e-12);
  }
}

TEST(Epitrochoid, EpicycloidTouchesFixedCircleAtCusps) {
  const double R = 2.0, r = 1.0;
  const auto ring = epitrochoid_ring(R, r, r, 1024);
  double min_radius = std::numeric_limits<double>::infinity();
  for (const auto& p : ring) min_radius = std::min(min_radius, p.norm());
  EXPECT_NEAR(min_radius, R, 1e-9);
  // Dense scan: local minima of the radius that reach the fixed circle.
  const int n = 100000;
  const double period = epitrochoid_period(R, r);
  auto rad = [&](int i) { return epitrochoid(R, r, r, period * i / n).norm(); };
  int cusps = 0;
  for (int i = 0; i < n; ++i)
    if (rad(i) <= rad((i + n - 1) % n) && rad(i) < rad((i + 1) % n) && rad(i) < R + 1e-6) ++cusps;
  EXPECT_EQ(cusps, 2);
}

TEST(Epitrochoid, PeriodFollowsReducedRatio) {
  EXPECT_NEAR(epitrochoid_period(3.0, 2.0), 2 * kTwoPi, 1e-12);
  EXPECT_NEAR(epitrochoid_period(2.0, 1.0), kTwoPi, 1e-12);
  EXPECT_THROW(epitrochoid_period(std::sqrt(2.0), 1.0), CycleError);
}

TEST(GrooveBand, StadiumArea) {
  const double L = 5.0, r = 0.4;
  const auto band = groove_band(Polyline({{0, 0}, {L, 0}}), r);
  EXPECT_NEAR(area(band), kPi * r * r + 2 * L * r, 1e-3 * (kPi * r * r + 2 * L * r));
}

TEST(GrooveBand, RejectsVanishingPeg) {
  EXPECT_THROW(groove_band(Polyline({{0, 0}, {1, 0}}), 1e-12), InvalidInput);
}

TEST(GrooveBand, CardioidMatchesPixelCount) {
  const double R = 1.0;
  const auto path = closed_path(epitrochoid_ring(R, R, R, 1024));
  const auto band = groove_band(path, 0.1 * R);
  EXPECT_TRUE(is_simple(band));
  const double pixels = pixel_band_area(path, 0.1 * R, 2e-3);
  EXPECT_NEAR(area(band), pixels, 1e-2 * pixels);
}

TEST(GrooveBand, ClosedPathLeavesInnerHole) {
  const auto path = closed_path(epitrochoid_ring(3.0, 1.0, 0.5, 1024));
  const auto band = groove_band(path, 0.2);
  EXPECT_EQ(band.holes.size(), 1u);
  EXPECT_FALSE(contains(band, Point2::Zero()));
}
