#pragma once

#include <vector>

#include "gearforge/geometry.hpp"
#include "gearforge/polygon.hpp"

namespace gearforge {

inline constexpr int kDefaultAlienPoses = 720;

// Driven turns per driving turn as a reduced fraction num/den. The relative
// motion repeats after den driving turns.
struct TurnRatio {
  long num = 1;
  long den = 1;

  double value() const { return static_cast<double>(num) / den; }
  // Throws CycleError unless `ratio` is p/q with q <= 1000 within 1e-9.
  static TurnRatio from(double ratio);
};

// Pose of the driver, seen from the driven gear's frame, after the driver
// turned by phi about c1 and the driven gear by -ratio*phi about c2.
RigidPose driven_frame_pose(const Point2& c1, const Point2& c2, double ratio,
                            double phi);

// S1 at phi_k = 2 pi k den / n_samples, k = 0..n_samples-1, in the driven frame.
std::vector<ClosedPolygon> sweep_in_driven_frame(const ClosedPolygon& s1,
                                                 const Point2& c1, const Point2& c2,
                                                 double ratio, int n_samples);

struct CarveOptions {
  int n_samples = kDefaultAlienPoses;
  // Drop hole vertices turning by less than 1e-6 rad.
  bool collapse_collinear = false;
};

// The hole of the swept union that contains c2, as a counterclockwise
// polygon; sweep islands inside that hole become its holes. Throws
// Infeasible if no hole contains c2.
ClosedPolygon carve_conjugate(const ClosedPolygon& s1, const Point2& c1,
                              const Point2& c2, double ratio,
                              const CarveOptions& options = {});

}  // namespace gearforge
