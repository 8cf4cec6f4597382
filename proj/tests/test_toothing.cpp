#include <gtest/gtest.h>

#include <cmath>

#include "gearforge/errors.hpp"
#include "gearforge/numerics.hpp"
#include "gearforge/toothing.hpp"

using namespace gearforge;

namespace {

PolarCurve circle(double radius) {
  return PolarCurve::sample([radius](double) { return radius; }, 4096);
}

RackSpec rack_for(double module) {
  RackSpec rack;
  rack.module = module;
  return rack;
}

// Teeth = cyclic runs of boundary vertices standing well outside the pitch
// curve.
int count_teeth(const ClosedPolygon& gear, const PolarCurve& pitch, double height) {
  const auto& ring = gear.outer;
  std::vector<bool> high(ring.size());
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const double theta = std::atan2(ring[i].y(), ring[i].x());
    high[i] = ring[i].norm() > pitch(theta) + height;
  }
  int runs = 0;
  for (std::size_t i = 0; i < ring.size(); ++i)
    if (high[i] && !high[(i + ring.size() - 1) % ring.size()]) ++runs;
  return runs;
}

// Symmetric Hausdorff distance restricted to vertices with radius >= r_min.
double banded_hausdorff(const Ring& a, const Ring& b, double r_min) {
  auto directed = [r_min](const Ring& from, const Ring& to) {
    double worst = 0.0;
    for (const auto& p : from)
      if (p.norm() >= r_min) worst = std::max(worst, distance_to_ring(p, to));
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

// Fraction of the circle of radius rho covered by material.
double material_fraction(const ClosedPolygon& gear, double rho) {
  const int samples = 20000;
  int inside = 0;
  for (int i = 0; i < samples; ++i)
    if (contains(gear, rho * unit_direction(kTwoPi * (i + 0.5) / samples))) ++inside;
  return static_cast<double>(inside) / samples;
}

}  // namespace

TEST(RollRack, CircleContactsAreTangent) {
  const double R = 24.0;
  const auto poses = roll_rack_poses(circle(R), rack_for(2.0), 8);
  ASSERT_EQ(poses.size(), 24u * 8u);
  for (const auto& rp : poses) {
    EXPECT_NEAR(rp.contact.norm(), R, 1e-9);
    EXPECT_NEAR(rp.tangent.dot(rp.contact.normalized()), 0.0, 1e-3);
    // The rack pitch line maps through the contact point along the tangent.
    const Point2 on_line = rp.pose(Point2(rp.rack_x + 1.0, 0.0));
    EXPECT_NEAR((on_line - rp.contact - rp.tangent).norm(), 0.0, 1e-9);
  }
}

TEST(RollRack, FirstPoseAtPitchPoint) {
  const auto pitch = circle(24.0);
  const auto poses = roll_rack_poses(pitch, rack_for(2.0), 4);
  EXPECT_NEAR((poses.front().contact - Point2(pitch(0.0), 0.0)).norm(), 0.0, 1e-12);
  EXPECT_NEAR((poses.front().pose(Point2::Zero()) - poses.front().contact).norm(), 0.0, 1e-12);
}

TEST(RollRack, DisplacementEqualsArclength) {
  // Ellipse-like curve scaled to 20 circular pitches.
  const double m = 1.5;
  auto base = PolarCurve::sample([](double t) { return 1.0 + 0.2 * std::cos(t); }, 2048);
  const auto pitch = base.scaled(20 * kPi * m / base.perimeter());
  const auto poses = roll_rack_poses(pitch, rack_for(m), 4);
  // Independent arclength: adaptive quadrature of sqrt(r^2 + r'^2) piece by
  // piece (r' is constant on each piece).
  auto piece = [&](double a, double b) {
    const double dr = pitch.slope(0.5 * (a + b));
    return integrate([&](double t) {
      const double r = pitch(t);
      return std::sqrt(r * r + dr * dr);
    }, a, b, 1e-13);
  };
  const auto knots = pitch.thetas();
  auto oracle = [&](double a, double b) {
    double sum = 0.0, lo = a;
    for (double k : knots) {
      if (k <= a) continue;
      if (k >= b) break;
      sum += piece(lo, k);
      lo = k;
    }
    return sum + piece(lo, b);
  };
  for (std::size_t k = 0; k + 1 < poses.size(); k += 5) {
    const double moved = poses[k + 1].arclength - poses[k].arclength;
    EXPECT_NEAR(moved, oracle(poses[k].theta, poses[k + 1].theta), 1e-9) << k;
  }
}

TEST(RollRack, RejectsNonIntegerToothCount) {
  EXPECT_THROW(roll_rack_poses(circle(24.3), rack_for(2.0), 8), Incompatible);
  EXPECT_NO_THROW(roll_rack_poses(circle(24.0 * (1 + 5e-4)), rack_for(2.0), 2));
}

TEST(CutTeeth, CircleMatchesClosedFormInvolute) {
  const double m = 2.0;
  const int n = 24;
  const auto rack = rack_for(m);
  const auto cut = cut_teeth(circle(0.5 * n * m), rack);
  EXPECT_EQ(count_teeth(cut.boundary, circle(0.5 * n * m), 0.5 * m), n);

  GearSpec spec;
  spec.teeth = n;
  spec.module = m;
  const auto closed = make_spur_profile(spec, {256, 64});
  // Flank band: above the generated-involute limit radius.
  const double R = spec.pitch_radius(), rb = spec.base_radius();
  const double hd = spec.dedendum_coef * m;
  const double s = std::sin(spec.pressure_angle);
  const double lead = R * s - hd / s;
  const double r_lim = std::sqrt(rb * rb + lead * lead);
  const double band = std::max(rb, r_lim) + 0.25 * m;
  EXPECT_LE(banded_hausdorff(cut.boundary.outer, closed.boundary.outer, band), 0.01 * m);
}

TEST(CutTeeth, SmallToothCountUndercuts) {
  const double m = 2.0;
  const int n = 8;
  const auto pitch = circle(0.5 * n * m);
  const auto cut = cut_teeth(pitch, rack_for(m));
  EXPECT_EQ(count_teeth(cut.boundary, pitch, 0.5 * m), n);
  EXPECT_TRUE(is_simple(cut.boundary));

  GearSpec spec;
  spec.teeth = n;
  spec.module = m;
  const auto closed = make_spur_profile(spec);
  ASSERT_FALSE(closed.warnings.empty());
  // Just below the base circle the rack has removed more than the radial clip.
  const double rho = spec.base_radius() - 0.3 * m;
  EXPECT_LT(material_fraction(cut.boundary, rho), material_fraction(closed.boundary, rho) - 0.02);
}

TEST(CutTeeth, EllipticalPitchCurve) {
  const double m = 2.0;
  auto base = PolarCurve::sample([](double t) { return 1.0 + 0.2 * std::cos(t); }, 4096);
  const auto pitch = base.scaled(24 * kPi * m / base.perimeter());
  const auto cut = cut_teeth(pitch, rack_for(m));
  EXPECT_EQ(cut.spec.teeth, 24);
  EXPECT_TRUE(is_simple(cut.boundary));
  EXPECT_TRUE(cut.boundary.holes.empty());
  EXPECT_EQ(count_teeth(cut.boundary, pitch, 0.5 * m), 24);
}

TEST(CutTeeth, EnvelopeConvergesQuadratically) {
  const double m = 2.0;
  const auto pitch = circle(24.0);
  const auto rack = rack_for(m);
  const auto c8 = cut_teeth(pitch, rack, 8).boundary.outer;
  const auto c16 = cut_teeth(pitch, rack, 16).boundary.outer;
  const auto c32 = cut_teeth(pitch, rack, 32).boundary.outer;
  // Flanks are enveloped by straight cutter edges: second order.
  const double flank = 22.6 + 0.25 * m;
  const double d1 = banded_hausdorff(c8, c16, flank);
  const double d2 = banded_hausdorff(c16, c32, flank);
  EXPECT_GE(d1 / d2, 3.0) << d1 << " " << d2;
  // The fillet is traced by sharp cutter corners, which converge only to first order.
  const double f1 = banded_hausdorff(c8, c16, 0.0);
  const double f2 = banded_hausdorff(c16, c32, 0.0);
  EXPECT_GE(f1 / f2, 1.8) << f1 << " " << f2;
}
