#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gearforge/acircular.hpp"
#include "gearforge/errors.hpp"
#include "gearforge/meshcheck.hpp"
#include "gearforge/toothing.hpp"

using namespace gearforge;

namespace {

constexpr int kDiskSegments = 1024;

ClosedPolygon disk(const Point2& center, double radius) {
  return make_polygon(circle_ring(center, radius, kDiskSegments));
}

// Brute force over every vertex/segment pair of the two posed rings.
double brute_gap(const Ring& a, const Ring& b) {
  double best = std::numeric_limits<double>::infinity();
  auto sweep = [&](const Ring& from, const Ring& to) {
    for (const auto& p : from)
      for (std::size_t i = 0; i < to.size(); ++i) {
        const Point2& u = to[i];
        const Point2& v = to[(i + 1) % to.size()];
        const Point2 d = v - u;
        const double t = std::clamp((p - u).dot(d) / d.squaredNorm(), 0.0, 1.0);
        best = std::min(best, (u + t * d - p).norm());
      }
  };
  sweep(a, b);
  sweep(b, a);
  return best;
}

std::vector<double> oracle_gaps(const ClosedPolygon& a, const ClosedPolygon& b, double dist,
                                const MotionLaw& law, int n_steps) {
  std::vector<double> out;
  for (int k = 0; k < n_steps; ++k) {
    const double t1 = kTwoPi * k / n_steps;
    const Eigen::Rotation2Dd ra(t1), rb(-law(t1));
    const Point2 c(dist, 0.0);
    Ring pa, pb;
    for (const auto& p : a.outer) pa.push_back(ra * p);
    for (const auto& p : b.outer) pb.push_back(c + rb * (p - c));
    out.push_back(brute_gap(pa, pb));
  }
  return out;
}

ClosedPolygon mirrored_about(const ClosedPolygon& shape, double x0) {
  Ring ring;
  for (const auto& p : shape.outer) ring.emplace_back(2.0 * x0 - p.x(), p.y());
  return make_polygon(std::move(ring));
}

GearSpec spec(int teeth, double module) {
  GearSpec s;
  s.teeth = teeth;
  s.module = module;
  return s;
}

struct SpurCase {
  GearAssembly involute;
  GearAssembly trapezoid;
  MeshReport involute_report;
  MeshReport trapezoid_report;
};

const SpurCase& spur_case() {
  static const SpurCase c = [] {
    SpurCase out;
    out.involute = assemble_pair(spec(20, 2.0), spec(30, 2.0));
    out.trapezoid = out.involute;
    out.trapezoid.gear1 = make_trapezoid_profile(spec(20, 2.0));
    out.trapezoid.gear2 = make_trapezoid_profile(spec(30, 2.0));
    out.involute_report = simulate_assembly(out.involute, 360);
    out.trapezoid_report = simulate_assembly(out.trapezoid, 360);
    return out;
  }();
  return c;
}

}  // namespace

TEST(SimulatePair, TangentPitchDisksTouchEverywhere) {
  const double r1 = 20.0, r2 = 30.0, a = r1 + r2;
  const auto law = MotionLaw::linear(r1 / r2);
  const auto d1 = disk({0, 0}, r1), d2 = disk({a, 0}, r2);
  const auto report = simulate_pair(d1, d2, a, law, 90);
  const auto oracle = oracle_gaps(d1, d2, a, law, 90);
  ASSERT_EQ(report.steps.size(), 90u);
  for (std::size_t k = 0; k < report.steps.size(); ++k) {
    const auto& step = report.steps[k];
    EXPECT_EQ(step.max_penetration_depth, 0.0);
    EXPECT_NEAR(step.min_contact_gap, oracle[k], 1e-12);
    EXPECT_LE(step.min_contact_gap, 5e-4);  // zero up to polygon resolution
    EXPECT_FALSE(step.contact_points.empty());
  }
}

TEST(SimulatePair, SeparatedDisksReportTheGap) {
  const double r1 = 20.0, r2 = 30.0, a = r1 + r2 + 0.1;
  const auto law = MotionLaw::linear(r1 / r2);
  const auto d1 = disk({0, 0}, r1), d2 = disk({a, 0}, r2);
  const auto report = simulate_pair(d1, d2, a, law, 90);
  const auto oracle = oracle_gaps(d1, d2, a, law, 90);
  for (std::size_t k = 0; k < report.steps.size(); ++k) {
    EXPECT_EQ(report.steps[k].max_penetration_depth, 0.0);
    EXPECT_NEAR(report.steps[k].min_contact_gap, oracle[k], 1e-12);
    EXPECT_NEAR(report.steps[k].min_contact_gap, 0.1, 5e-4);
  }
}

TEST(SimulatePair, OverlappingDisksPenetrate) {
  // Lens of two unit-ish disks overlapping by 0.2: inradius 0.1.
  const double r = 10.0, a = 2.0 * r - 0.2;
  const auto report = simulate_pair(disk({0, 0}, r), disk({a, 0}, r), a,
                                    MotionLaw::linear(1.0), 8);
  for (const auto& step : report.steps) {
    EXPECT_NEAR(step.max_penetration_depth, 0.1, 2e-3);
    EXPECT_EQ(step.min_contact_gap, 0.0);
  }
}

TEST(SimulatePair, InvolutePairMeshesCleanly) {
  const auto& c = spur_case();
  const double m = 2.0;
  ASSERT_EQ(c.involute_report.steps.size(), 360u);
  for (const auto& step : c.involute_report.steps) {
    EXPECT_LE(step.max_penetration_depth, 1e-3 * m);
    EXPECT_LE(step.min_contact_gap, 0.05 * m);
    EXPECT_FALSE(step.contact_points.empty());
    EXPECT_EQ(step.contact_points.size(), step.contact_gaps.size());
  }
  // Frozen from the reference run: the worst step gap is flank chord sag.
  const auto summary = c.involute_report.summary();
  EXPECT_EQ(summary.max_penetration_depth, 0.0);
  EXPECT_NEAR(summary.max_min_gap, 1.031e-4, 2e-6);
  EXPECT_EQ(summary.steps_without_contact, 0);
}

TEST(SimulatePair, InvoluteGapsMatchBruteForce) {
  const auto& c = spur_case();
  const auto oracle = oracle_gaps(c.involute.gear1.boundary, placed_gear2(c.involute),
                                  c.involute.center_distance, c.involute.law(), 12);
  for (std::size_t k = 0; k < oracle.size(); ++k)
    EXPECT_NEAR(c.involute_report.steps[30 * k].min_contact_gap, oracle[k], 1e-12);
}

TEST(LineOfAction, InvoluteContactsStayOnTheTangent) {
  const auto& c = spur_case();
  const double involute = line_of_action_error(c.involute, c.involute_report);
  const double trapezoid = line_of_action_error(c.trapezoid, c.trapezoid_report);
  EXPECT_LE(involute, 0.01 * 2.0);
  EXPECT_GE(trapezoid, 5.0 * involute);
}

TEST(LineOfAction, PitchPointHasNoError) {
  const auto& c = spur_case();
  MeshReport report;
  MeshStep step;
  step.contact_points.push_back(Point2(c.involute.gear1.pitch_radius, 0.0));
  step.contact_gaps.push_back(0.0);
  report.steps.push_back(step);
  EXPECT_NEAR(line_of_action_error(c.involute, report), 0.0, 1e-12);
}

TEST(LineOfAction, NoContactThrows) {
  const auto& c = spur_case();
  MeshReport report;
  report.steps.emplace_back();
  EXPECT_THROW(line_of_action_error(c.involute, report), InvalidInput);
}

TEST(MeasureRatio, MaximalAdvanceRecoversToothRatio) {
  const auto& c = spur_case();
  const auto ratio = measure_ratio(c.involute.gear1.boundary, placed_gear2(c.involute),
                                   c.involute.center_distance, 120);
  ASSERT_EQ(ratio.driven_angles.size(), 121u);
  EXPECT_NEAR(ratio.mean_ratio / (2.0 / 3.0), 1.0, 1e-3);
  for (std::size_t k = 1; k < ratio.driven_angles.size(); ++k)
    EXPECT_GE(ratio.driven_angles[k], ratio.driven_angles[k - 1]);
}

TEST(SimulatePair, SwappingRolesMirrorsTheReport) {
  const auto pair = assemble_pair(spec(20, 2.0), spec(20, 2.0));
  const double a = pair.center_distance;
  const ClosedPolygon g1 = pair.gear1.boundary;
  const ClosedPolygon g2 = placed_gear2(pair);
  const auto law = MotionLaw::linear(1.0);
  const auto forward = simulate_pair(g1, g2, a, law, 48);
  const auto swapped =
      simulate_pair(mirrored_about(g2, 0.5 * a), mirrored_about(g1, 0.5 * a), a, law, 48);
  ASSERT_EQ(forward.steps.size(), swapped.steps.size());
  for (std::size_t k = 0; k < forward.steps.size(); ++k) {
    EXPECT_NEAR(forward.steps[k].max_penetration_depth,
                swapped.steps[k].max_penetration_depth, 1e-9);
    EXPECT_NEAR(forward.steps[k].min_contact_gap, swapped.steps[k].min_contact_gap, 1e-9);
  }
}

TEST(SimulatePair, AcircularPairKeepsContact) {
  // Ellipse-like driver with 24 teeth, driven curve from the 1:1 center
  // distance, both cut from the same rack.
  const double m = 2.0;
  const auto base = PolarCurve::sample([](double t) { return 1.0 + 0.2 * std::cos(t); }, 4096);
  const auto r1 = base.scaled(24 * kPi * m / base.perimeter());
  const double a = solve_center_distance(r1, 1, 1);
  const auto pitch = driven_motion(r1, a);
  RackSpec rack;
  rack.module = m;
  const auto gears = cut_pitch_pair(pitch, rack);

  MeshOptions options;
  options.contact_tolerance = 0.02 * m;
  const auto report =
      simulate_pair(gears.driver_placed, gears.driven_placed, a, pitch.law, 360, options);
  for (const auto& step : report.steps) {
    EXPECT_LE(step.min_contact_gap, 0.05 * m);
    EXPECT_FALSE(step.contact_points.empty());
  }
  EXPECT_LE(report.summary().max_penetration_depth, 1e-3 * m);
}

TEST(WriteReport, HeaderAndOneLinePerStep) {
  const double r1 = 10.0, r2 = 15.0, a = r1 + r2 + 0.5;
  const auto report = simulate_pair(disk({0, 0}, r1), disk({a, 0}, r2), a,
                                    MotionLaw::linear(r1 / r2), 12);
  std::ostringstream out;
  write_report(report, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line,
            "step\ttheta1\ttheta2\tmax_penetration_depth\tmin_contact_gap\t"
            "overlap_area\tcontact_count\tcontact_points");
  int records = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), '\t'), 7);
    ++records;
  }
  EXPECT_EQ(records, 12);

  std::ostringstream again;
  write_report(simulate_pair(disk({0, 0}, r1), disk({a, 0}, r2), a,
                             MotionLaw::linear(r1 / r2), 12),
               again);
  EXPECT_EQ(out.str(), again.str());
}

TEST(SimulatePair, RejectsBadArguments) {
  const auto a = disk({0, 0}, 1.0), b = disk({3, 0}, 1.0);
  EXPECT_THROW(simulate_pair(a, b, 3.0, MotionLaw::linear(1.0), 0), InvalidInput);
  EXPECT_THROW(simulate_pair(a, b, 0.0, MotionLaw::linear(1.0), 4), InvalidInput);
}
