#pragma once

#include <cstddef>
#include <vector>

#include "gearforge/geometry.hpp"
#include "gearforge/motion.hpp"

namespace gearforge {

inline constexpr std::size_t kDefaultPitchGrid = 4096;

// Two pitch curves rolling on fixed axles `center_distance` apart.
// r1(theta1) + r2(law(theta1)) = center_distance at every grid angle.
struct PitchPair {
  PolarCurve r1;
  PolarCurve r2;
  double center_distance;
  MotionLaw law;
};

// Pitch curves that only roll over a limited angular range; they are not
// closed curves and carry no periodic motion law.
struct OpenPitchPair {
  std::vector<double> theta1;
  std::vector<double> theta2;
  std::vector<double> r1;
  std::vector<double> r2;
  double center_distance = 0.0;
};

// theta2(theta1) = integral_0^theta1 r1 / (a - r1), exact for the
// piecewise-linear r1. Throws Infeasible if r1 reaches a anywhere.
PitchPair driven_motion(const PolarCurve& r1, double center_distance,
                        std::size_t grid = kDefaultPitchGrid);

// Driven angle after theta1 of driving rotation (theta1 may exceed 2pi).
double driven_angle(const PolarCurve& r1, double center_distance, double theta1);

// Center distance at which p driving turns give exactly q driven turns.
double solve_center_distance(const PolarCurve& r1, int p, int q);

// Inverts r1 dtheta1 = (a - r1) dtheta2 for a prescribed law:
// r1 = a theta2' / (1 + theta2').
PitchPair pitch_from_motion(const MotionLaw& law, double center_distance);

// Pair of identical involute spirals of the given base radius, rolling while
// the driver sweeps `sweep` radians (< 2pi).
OpenPitchPair nautilus_pair(double base_radius, double sweep,
                            std::size_t samples = 1024);

// Smallest p/q (q <= max_den) within tol of x; {0, 0} if none.
struct Fraction {
  long num = 0;
  long den = 0;
};
Fraction rationalize(double x, long max_den, double tol);

}  // namespace gearforge
