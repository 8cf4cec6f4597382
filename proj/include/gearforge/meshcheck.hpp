#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "gearforge/geometry.hpp"
#include "gearforge/involute.hpp"
#include "gearforge/motion.hpp"
#include "gearforge/polygon.hpp"

namespace gearforge {

struct MeshStep {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double max_penetration_depth = 0.0;  // mm
  double min_contact_gap = 0.0;        // mm
  double overlap_area = 0.0;
  std::vector<Point2> contact_points;
  std::vector<double> contact_gaps;  // boundary distance at each contact point
};

struct MeshSummary {
  double max_penetration_depth = 0.0;
  double max_min_gap = 0.0;  // worst step
  double min_min_gap = 0.0;  // best step
  double max_overlap_area = 0.0;
  int steps_without_contact = 0;
};

struct MeshReport {
  std::vector<MeshStep> steps;
  MeshSummary summary() const;
};

struct MeshOptions {
  double contact_tolerance = 0.04;  // mm
};

// A turns counterclockwise about the origin by theta1 = 2pi k / n_steps.
// B is given in place around (center_distance, 0) and turns clockwise about
// that point by law(theta1). Reports, never throws, on bad meshing.
MeshReport simulate_pair(const ClosedPolygon& a, const ClosedPolygon& b,
                         double center_distance, const MotionLaw& law,
                         int n_steps, const MeshOptions& options = {});

// Gear 2 turned by its phase and moved onto (center_distance, 0).
ClosedPolygon placed_gear2(const GearAssembly& assembly);

// simulate_pair with contact tolerance 0.02 m.
MeshReport simulate_assembly(const GearAssembly& assembly, int n_steps);

// Max distance from a reported contact point to the nearer interior common
// tangent of the base circles. Throws InvalidInput if nothing touched.
double line_of_action_error(const GearAssembly& assembly, const MeshReport& report);

struct RatioMeasurement {
  double mean_ratio = 0.0;
  std::vector<double> driven_angles;  // one per step, including theta1 = 0
};

// Drive A through one turn in n_steps; at each step turn B forward by the
// least angle that clears the overlap.
RatioMeasurement measure_ratio(const ClosedPolygon& a, const ClosedPolygon& b,
                               double center_distance, int n_steps);

// Tab separated, header line first, one record per step.
void write_report(const MeshReport& report, std::ostream& out);
void write_report(const MeshReport& report, const std::filesystem::path& path);

}  // namespace gearforge
