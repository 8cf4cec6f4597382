#include "gearforge/motion.hpp"

#include <algorithm>
#include <cmath>

#include "gearforge/errors.hpp"
#include "gearforge/geometry.hpp"

namespace gearforge {

MotionLaw::MotionLaw(std::vector<double> driving, std::vector<double> driven)
    : driving_(std::move(driving)), driven_(std::move(driven)) {
  if (driving_.size() != driven_.size() || driving_.size() < 2)
    throw InvalidInput("motion law: need >= 2 matching samples");
  if (driving_.front() != 0.0 || std::abs(driving_.back() - kTwoPi) > 1e-12)
    throw InvalidInput("motion law: driving angle must span [0, 2pi]");
  if (driven_.front() != 0.0)
    throw InvalidInput("motion law: driven angle must start at 0");
  driving_.back() = kTwoPi;
  for (std::size_t i = 1; i < driving_.size(); ++i) {
    if (!(driving_[i] > driving_[i - 1]))
      throw InvalidInput("motion law: driving angle must increase");
    if (!(driven_[i] > driven_[i - 1]))
      throw InvalidInput("motion law: driven angle must strictly increase");
  }
}

MotionLaw MotionLaw::linear(double ratio) {
  if (!(ratio > 0.0)) throw InvalidInput("motion law: ratio must be positive");
  return MotionLaw({0.0, kTwoPi}, {0.0, ratio * kTwoPi});
}

MotionLaw MotionLaw::sample(const std::function<double(double)>& f,
                            std::size_t n) {
  std::vector<double> t(n + 1), v(n + 1);
  const double f0 = f(0.0);
  for (std::size_t i = 0; i <= n; ++i) {
    t[i] = (i == n) ? kTwoPi : kTwoPi * static_cast<double>(i) / n;
    v[i] = f(t[i]) - f0;
  }
  v[0] = 0.0;
  return MotionLaw(std::move(t), std::move(v));
}

double MotionLaw::interpolate(std::span<const double> xs,
                              std::span<const double> ys, double x) {
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = static_cast<std::size_t>(std::distance(xs.begin(), it));
  i = std::clamp<std::size_t>(i, 1, xs.size() - 1);
  const double u = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return (1.0 - u) * ys[i - 1] + u * ys[i];
}

double MotionLaw::operator()(double theta1) const {
  const double turns = std::floor(theta1 / kTwoPi);
  const double local = theta1 - turns * kTwoPi;
  return turns * turn_advance() + interpolate(driving_, driven_, local);
}

double MotionLaw::inverse(double theta2) const {
  const double turns = std::floor(theta2 / turn_advance());
  const double local = theta2 - turns * turn_advance();
  return turns * kTwoPi + interpolate(driven_, driving_, local);
}

bool MotionLaw::uniform() const {
  const double h = kTwoPi / static_cast<double>(driving_.size() - 1);
  for (std::size_t i = 0; i < driving_.size(); ++i)
    if (std::abs(driving_[i] - h * static_cast<double>(i)) > 1e-12) return false;
  return true;
}

}  // namespace gearforge
