#pragma once

#include <vector>

#include "gearforge/acircular.hpp"
#include "gearforge/geometry.hpp"
#include "gearforge/involute.hpp"
#include "gearforge/polygon.hpp"

namespace gearforge {

inline constexpr int kDefaultPosesPerTooth = 64;

// Rack local frame: pitch line on the x-axis, +y pointing into the gear.
// Pose k maps that frame so the rack point (s_k, 0) sits on the pitch curve
// at arclength s_k with the pitch line tangent there.
struct RackPose {
  double arclength = 0.0;
  double rack_x = 0.0;  // rack pitch-line coordinate touching the contact
  double theta = 0.0;  // polar angle of the contact point
  Point2 contact = Point2::Zero();
  Point2 tangent = Point2::UnitY();
  RigidPose pose;
};

// Number of teeth implied by the pitch curve length; throws Incompatible if
// the length is not an integer number of circular pitches within 1e-3.
int tooth_count_for(const PolarCurve& pitch, double module);

// Gear teeth end up centred on arclengths k*p + rack_offset.
std::vector<RackPose> roll_rack_poses(const PolarCurve& pitch, const RackSpec& rack,
                                      int samples_per_tooth = kDefaultPosesPerTooth,
                                      double rack_offset = 0.0);

// Cutter material around the crown nearest `center_x`, in the rack frame.
// The cutter is the complement of the gear's basic rack: its crowns reach
// dedendum_coef*m into the gear, gaps centred on x = k*p.
ClosedPolygon cutter_material(const RackSpec& rack, double center_x);

// Blank (pitch curve grown by the addendum) minus the rolled cutter.
// Throws ResolutionError if the result is not a single simple polygon.
GearProfile cut_teeth(const PolarCurve& pitch, const RackSpec& rack,
                      int samples_per_tooth = kDefaultPosesPerTooth,
                      double rack_offset = 0.0);

// Both gears of a pitch pair cut from the same rack and placed for
// simulate_pair: the driver at the origin, mirrored so that turning it
// counterclockwise walks r1 forward; the driven gear around
// (center_distance, 0) with a gap facing the driver's first tooth.
struct CutPair {
  GearProfile driver;
  GearProfile driven;
  ClosedPolygon driver_placed;
  ClosedPolygon driven_placed;
};

CutPair cut_pitch_pair(const PitchPair& pitch, const RackSpec& rack,
                       int samples_per_tooth = kDefaultPosesPerTooth);

}  // namespace gearforge
