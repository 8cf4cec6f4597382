#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gearforge {

// Driven angle theta2 as a strictly increasing function of the driving angle
// theta1, tabulated over one driving turn [0, 2pi] and extended beyond it by
// theta2(theta1 + 2pi k) = theta2(theta1) + k * theta2(2pi).
class MotionLaw {
 public:
  MotionLaw(std::vector<double> driving, std::vector<double> driven);

  // theta2 = ratio * theta1.
  static MotionLaw linear(double ratio);
  // n uniform intervals of f over [0, 2pi]; f(0) is subtracted off.
  static MotionLaw sample(const std::function<double(double)>& f,
                          std::size_t n);

  double operator()(double theta1) const;
  double inverse(double theta2) const;
  // theta2 reached after one driving turn.
  double turn_advance() const { return driven_.back(); }

  std::span<const double> driving() const { return driving_; }
  std::span<const double> driven() const { return driven_; }
  std::size_t size() const { return driving_.size(); }
  bool uniform() const;

 private:
  static double interpolate(std::span<const double> xs,
                            std::span<const double> ys, double x);

  std::vector<double> driving_;
  std::vector<double> driven_;
};

}  // namespace gearforge
