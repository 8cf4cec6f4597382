#include "gearforge/toothing.hpp"

#include <cmath>
#include <sstream>

#include "gearforge/errors.hpp"

namespace gearforge {
namespace {

constexpr int kWindowTeeth = 3;  // cutter crowns on each side of the contact
constexpr int kBlankSamples = 4096;

Point2 pitch_tangent(const PolarCurve& pitch, double theta) {
  const double r = pitch(theta);
  const double dr = pitch.slope(theta);
  const Point2 u = unit_direction(theta);
  return (dr * u + r * left_normal<double>(u)).normalized();
}

ClosedPolygon blank_polygon(const PolarCurve& pitch, double addendum) {
  Ring ring;
  ring.reserve(kBlankSamples);
  for (int i = 0; i < kBlankSamples; ++i)
    ring.push_back(pitch.point(kTwoPi * i / kBlankSamples));
  PolygonSet grown = offset({make_polygon(std::move(ring))}, addendum, 64);
  if (grown.size() != 1) throw ResolutionError("cut_teeth: blank offset split");
  return grown.front();
}

}  // namespace

int tooth_count_for(const PolarCurve& pitch, double module) {
  const double teeth = pitch.perimeter() / (kPi * module);
  const long n = std::lround(teeth);
  if (n < 1 || std::abs(teeth - n) > 1e-3 * teeth) {
    std::ostringstream msg;
    msg << "pitch curve length " << pitch.perimeter() << " is " << teeth
        << " circular pitches; need an integer tooth count";
    throw Incompatible(msg.str());
  }
  return static_cast<int>(n);
}

std::vector<RackPose> roll_rack_poses(const PolarCurve& pitch, const RackSpec& rack,
                                      int samples_per_tooth, double rack_offset) {
  rack.validate();
  if (samples_per_tooth < 1) throw InvalidInput("samples_per_tooth must be >= 1");
  const int n = tooth_count_for(pitch, rack.module);
  const int total = n * samples_per_tooth;
  const double length = pitch.perimeter();
  std::vector<RackPose> poses(static_cast<std::size_t>(total));
  for (int k = 0; k < total; ++k) {
    RackPose& out = poses[static_cast<std::size_t>(k)];
    out.arclength = length * k / total;
    out.rack_x = out.arclength - rack_offset;
    out.theta = (k == 0) ? 0.0 : pitch.theta_at_arclength(out.arclength);
    out.contact = pitch.point(out.theta);
    out.tangent = pitch_tangent(pitch, out.theta);
    const double angle = std::atan2(out.tangent.y(), out.tangent.x());
    const Point2 shifted = Eigen::Rotation2Dd(angle) * Point2(out.rack_x, 0.0);
    out.pose = RigidPose{angle, Point2::Zero(), out.contact - shifted};
  }
  return poses;
}

ClosedPolygon cutter_material(const RackSpec& rack, double center_x) {
  // Cutter crowns are the gear's dedendum; its gaps clear the gear tip by
  // a quarter module so the tip stays on the blank.
  RackSpec cutter = rack;
  cutter.tooth_count = 2 * kWindowTeeth + 1;
  cutter.addendum_coef = rack.dedendum_coef;
  cutter.dedendum_coef = rack.addendum_coef + 0.25;
  const Polyline profile = make_rack_profile(cutter);
  const double p = rack.pitch();
  const double shift = (std::round(center_x / p - 0.5) - kWindowTeeth + 0.5) * p;
  const double depth = (cutter.dedendum_coef + 2.0 * (rack.addendum_coef +
                                                      rack.dedendum_coef)) * rack.module;
  Ring ring;
  ring.reserve(profile.size() + 2);
  for (const auto& q : profile.points()) ring.emplace_back(q.x() + shift, q.y());
  const double x0 = ring.front().x(), x1 = ring.back().x();
  ring.emplace_back(x1, -depth);
  ring.emplace_back(x0, -depth);
  return make_polygon(std::move(ring));
}

GearProfile cut_teeth(const PolarCurve& pitch, const RackSpec& rack,
                      int samples_per_tooth, double rack_offset) {
  const auto poses = roll_rack_poses(pitch, rack, samples_per_tooth, rack_offset);
  const int n = tooth_count_for(pitch, rack.module);

  std::vector<ClosedPolygon> material;
  material.reserve(poses.size());
  for (const auto& rp : poses)
    material.push_back(transformed(cutter_material(rack, rp.rack_x), rp.pose));
  const PolygonSet swept = union_all(material);

  const ClosedPolygon blank = blank_polygon(pitch, rack.addendum_coef * rack.module);
  PolygonSet cut = polygon_boolean(BooleanOp::Difference, {blank}, swept);
  if (cut.size() != 1 || !cut.front().holes.empty() || !is_simple(cut.front())) {
    std::ostringstream msg;
    msg << "cut_teeth: envelope produced " << cut.size()
        << " pieces; retry with samples_per_tooth = " << 2 * samples_per_tooth;
    throw ResolutionError(msg.str());
  }

  GearProfile out;
  out.boundary = std::move(cut.front());
  out.pitch_radius = pitch.perimeter() / kTwoPi;
  out.base_radius = out.pitch_radius * std::cos(rack.pressure_angle);
  out.spec.teeth = n;
  out.spec.module = rack.module;
  out.spec.pressure_angle = rack.pressure_angle;
  out.spec.addendum_coef = rack.addendum_coef;
  out.spec.dedendum_coef = rack.dedendum_coef;
  return out;
}

CutPair cut_pitch_pair(const PitchPair& pitch, const RackSpec& rack, int samples_per_tooth) {
  CutPair out;
  out.driver = cut_teeth(pitch.r1, rack, samples_per_tooth);
  out.driven = cut_teeth(pitch.r2, rack, samples_per_tooth, 0.5 * rack.pitch());
  Ring mirrored;
  mirrored.reserve(out.driver.boundary.outer.size());
  for (const auto& p : out.driver.boundary.outer) mirrored.emplace_back(p.x(), -p.y());
  out.driver_placed = make_polygon(std::move(mirrored));
  out.driven_placed = transformed(
      out.driven.boundary, RigidPose{kPi, Point2::Zero(), Point2(pitch.center_distance, 0.0)});
  return out;
}

}  // namespace gearforge
