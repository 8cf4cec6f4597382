#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gearforge/geometry.hpp"
#include "gearforge/motion.hpp"
#include "gearforge/polygon.hpp"

namespace gearforge {

inline constexpr double kDefaultPressureAngle = 20.0 * kPi / 180.0;

// Tooth anatomy in parameter form. Module convention: pitch diameter n*m,
// circular pitch pi*m.
struct GearSpec {
  int teeth = 20;
  double module = 1.0;
  double pressure_angle = kDefaultPressureAngle;
  double addendum_coef = 1.0;
  double dedendum_coef = 1.25;
  double cutout_coef = 0.0;

  double pitch_radius() const { return 0.5 * teeth * module; }
  double base_radius() const { return pitch_radius() * std::cos(pressure_angle); }
  double addendum_radius() const { return pitch_radius() + addendum_coef * module; }
  double root_radius() const {
    return pitch_radius() - (dedendum_coef + cutout_coef) * module;
  }
  double circular_pitch() const { return kPi * module; }
  // Below this tooth count the generating rack undercuts the flank.
  double undercut_threshold() const;

  void validate() const;
};

// Generating rack: pitch line on the x-axis, teeth above it.
struct RackSpec {
  double module = 1.0;
  double pressure_angle = kDefaultPressureAngle;
  int tooth_count = 5;
  double addendum_coef = 1.0;
  double dedendum_coef = 1.25;

  double pitch() const { return kPi * module; }
  void validate() const;
};

struct GearProfile {
  ClosedPolygon boundary;
  double pitch_radius = 0.0;
  double base_radius = 0.0;
  GearSpec spec;
  std::vector<std::string> warnings;
};

struct ProfileOptions {
  int flank_samples = 64;
  int arc_samples = 16;
};

// Two meshing gears: gear 1 at the origin, gear 2 at (center_distance, 0),
// gear 2 turned by phase2 so a gap faces gear 1.
struct GearAssembly {
  GearProfile gear1;
  GearProfile gear2;
  double center_distance = 0.0;
  double phase1 = 0.0;
  double phase2 = 0.0;
  double ratio = 1.0;  // driven turns per driving turn

  MotionLaw law() const { return MotionLaw::linear(ratio); }
};

// Involute of the circle of radius r, unwound by angle theta.
template <typename Scalar>
Vec2<Scalar> involute_of_circle(Scalar r, Scalar theta) {
  using std::cos;
  using std::sin;
  const Scalar c = cos(theta), s = sin(theta);
  return Vec2<Scalar>(r * (c + theta * s), r * (s - theta * c));
}

// Unwind angle at which the circle involute reaches `radius`.
template <typename Scalar>
Scalar involute_roll_at_radius(Scalar base_radius, Scalar radius) {
  using std::sqrt;
  const Scalar q = radius / base_radius;
  return sqrt(q * q - Scalar(1));
}

// inv(alpha) = tan(alpha) - alpha.
template <typename Scalar>
Scalar involute_function(Scalar alpha) {
  using std::tan;
  return tan(alpha) - alpha;
}

// Point reached by a taut string unwound from `gamma` between t0 and t:
// gamma(t) - T(t) * L(t0, t). T is the unit tangent, blended between the
// bisector tangents at the vertices so it varies continuously.
Point2 involute_of_curve(const Polyline& gamma, double t0, double t);
Point2 polyline_unit_tangent(const Polyline& gamma, double t);

Polyline make_rack_profile(const RackSpec& spec);

GearProfile make_spur_profile(const GearSpec& spec,
                              const ProfileOptions& options = {});

GearAssembly assemble_pair(const GearSpec& spec1, const GearSpec& spec2,
                           const ProfileOptions& options = {});

// Gear whose teeth are the rack's straight-sided trapezoids wrapped onto the
// pitch circle; a non-involute control for mesh checks.
GearProfile make_trapezoid_profile(const GearSpec& spec,
                                   const ProfileOptions& options = {});

}  // namespace gearforge
