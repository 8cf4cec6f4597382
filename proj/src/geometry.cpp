#include "gearforge/geometry.hpp"

#include <algorithm>
#include <limits>

#include "gearforge/errors.hpp"
#include "gearforge/numerics.hpp"

namespace gearforge {

Ring transformed(const Ring& ring, const RigidPose& pose) {
  const Eigen::Isometry2d iso = pose.isometry();
  Ring out;
  out.reserve(ring.size());
  for (const auto& p : ring) out.push_back(iso * p);
  return out;
}

double wrap_angle(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// Polyline

Polyline::Polyline(std::vector<Point2> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw InvalidInput("polyline needs at least 2 points");
  cumulative_.reserve(points_.size());
  cumulative_.push_back(0.0);
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!points_[i].allFinite()) throw InvalidInput("polyline point not finite");
    const double len = (points_[i] - points_[i - 1]).norm();
    if (len <= kSnapTolerance)
      throw InvalidInput("polyline has coincident consecutive points");
    cumulative_.push_back(cumulative_.back() + len);
  }
}

std::size_t Polyline::segment_of(double t) const {
  if (t <= 0.0) return 0;
  const auto last = segment_count() - 1;
  const auto i = static_cast<std::size_t>(std::floor(t));
  return std::min(i, last);
}

Point2 Polyline::at(double t) const {
  t = std::clamp(t, 0.0, parameter_end());
  const std::size_t i = segment_of(t);
  const double u = t - static_cast<double>(i);
  return (1.0 - u) * points_[i] + u * points_[i + 1];
}

Point2 Polyline::tangent(double t) const {
  t = std::clamp(t, 0.0, parameter_end());
  std::size_t i = segment_of(t);
  // At an interior vertex use the incoming segment.
  if (i > 0 && t == static_cast<double>(i)) --i;
  return (points_[i + 1] - points_[i]).normalized();
}

double Polyline::length_to(double t) const {
  t = std::clamp(t, 0.0, parameter_end());
  const std::size_t i = segment_of(t);
  const double u = t - static_cast<double>(i);
  return cumulative_[i] + u * (cumulative_[i + 1] - cumulative_[i]);
}

double arclength(const Polyline& curve, double from, double to) {
  return std::abs(curve.length_to(to) - curve.length_to(from));
}

// ---------------------------------------------------------------------------
// PolarCurve

PolarCurve::PolarCurve(std::vector<double> theta, std::vector<double> radius)
    : theta_(std::move(theta)), radius_(std::move(radius)) {
  if (theta_.size() != radius_.size())
    throw InvalidInput("polar curve: theta/radius length mismatch");
  if (theta_.size() < 3) throw InvalidInput("polar curve needs >= 3 samples");
  if (theta_.front() != 0.0)
    throw InvalidInput("polar curve must start at theta = 0");
  for (std::size_t i = 0; i < theta_.size(); ++i) {
    if (!std::isfinite(theta_[i]) || !std::isfinite(radius_[i]))
      throw InvalidInput("polar curve sample not finite");
    if (radius_[i] <= 0.0) throw InvalidInput("polar curve radius must be > 0");
    if (i > 0 && theta_[i] <= theta_[i - 1])
      throw InvalidInput("polar curve theta must be strictly increasing");
  }
  if (theta_.back() >= kTwoPi)
    throw InvalidInput("polar curve samples must lie in [0, 2pi)");

  const std::size_t n = theta_.size();
  cumulative_.resize(n + 1);
  cumulative_[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    cumulative_[i + 1] =
        cumulative_[i] + piece_arclength(i, knot_theta(i), knot_theta(i + 1));
}

PolarCurve PolarCurve::sample(const std::function<double(double)>& f,
                              std::size_t n) {
  std::vector<double> theta(n), radius(n);
  for (std::size_t i = 0; i < n; ++i) {
    theta[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    radius[i] = f(theta[i]);
  }
  return PolarCurve(std::move(theta), std::move(radius));
}

double PolarCurve::knot_theta(std::size_t i) const {
  return i == theta_.size() ? kTwoPi : theta_[i];
}

double PolarCurve::knot_radius(std::size_t i) const {
  return radius_[i == theta_.size() ? 0 : i];
}

std::size_t PolarCurve::piece_of(double reduced) const {
  auto it = std::upper_bound(theta_.begin(), theta_.end(), reduced);
  return static_cast<std::size_t>(std::distance(theta_.begin(), it)) - 1;
}

double PolarCurve::operator()(double theta) const {
  const double t = wrap_angle(theta);
  const std::size_t i = piece_of(t);
  const double t0 = knot_theta(i), t1 = knot_theta(i + 1);
  const double u = (t - t0) / (t1 - t0);
  return (1.0 - u) * knot_radius(i) + u * knot_radius(i + 1);
}

double PolarCurve::slope(double theta) const {
  const std::size_t i = piece_of(wrap_angle(theta));
  return (knot_radius(i + 1) - knot_radius(i)) /
         (knot_theta(i + 1) - knot_theta(i));
}

double PolarCurve::min_radius() const {
  return *std::min_element(radius_.begin(), radius_.end());
}

double PolarCurve::max_radius() const {
  return *std::max_element(radius_.begin(), radius_.end());
}

double PolarCurve::piece_arclength(std::size_t i, double from,
                                   double to) const {
  const double t0 = knot_theta(i);
  const double r0 = knot_radius(i);
  const double k = (knot_radius(i + 1) - r0) / (knot_theta(i + 1) - t0);
  // ds = sqrt(r^2 + r'^2) dtheta with r linear on the piece.
  return gauss_legendre5(
      [&](double t) {
        const double r = r0 + k * (t - t0);
        return std::sqrt(r * r + k * k);
      },
      from, to);
}

double PolarCurve::arclength_to(double theta) const {
  const double turns = std::floor(theta / kTwoPi);
  const double t = wrap_angle(theta);
  const std::size_t i = piece_of(t);
  return turns * perimeter() + cumulative_[i] +
         piece_arclength(i, knot_theta(i), t);
}

double PolarCurve::theta_at_arclength(double s) const {
  const double turns = std::floor(s / perimeter());
  double rem = s - turns * perimeter();
  rem = std::clamp(rem, 0.0, perimeter());
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), rem);
  std::size_t i = static_cast<std::size_t>(std::distance(cumulative_.begin(), it));
  i = std::clamp<std::size_t>(i, 1, theta_.size()) - 1;
  const double t0 = knot_theta(i), t1 = knot_theta(i + 1);
  const double target = rem - cumulative_[i];
  const double t = find_root(
      [&](double x) { return piece_arclength(i, t0, x) - target; }, t0, t1,
      1e-15);
  return turns * kTwoPi + t;
}

PolarCurve PolarCurve::scaled(double factor) const {
  std::vector<double> r(radius_);
  for (auto& v : r) v *= factor;
  return PolarCurve(theta_, std::move(r));
}

Ring PolarCurve::to_ring() const {
  Ring ring;
  ring.reserve(theta_.size());
  for (std::size_t i = 0; i < theta_.size(); ++i)
    ring.push_back(radius_[i] * unit_direction(theta_[i]));
  return ring;
}

double arclength(const PolarCurve& curve, double from, double to) {
  return std::abs(curve.arclength_to(to) - curve.arclength_to(from));
}

// ---------------------------------------------------------------------------
// Distances

double signed_area(std::span<const Point2> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return 0.0;
  // Shoelace relative to the first vertex to limit cancellation.
  const Point2& o = ring[0];
  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i)
    sum += cross<double>(ring[i] - o, ring[i + 1] - o);
  return 0.5 * sum;
}

Point2 project_onto_segment(const Point2& p, const Point2& a,
                            const Point2& b) {
  const Point2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return a;
  const double u = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return a + u * ab;
}

double point_segment_distance(const Point2& p, const Point2& a,
                              const Point2& b) {
  return (p - project_onto_segment(p, a, b)).norm();
}

double distance_to_ring(const Point2& p, std::span<const Point2> ring) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i)
    best = std::min(best, point_segment_distance(p, ring[i], ring[(i + 1) % n]));
  return best;
}

double distance_to_path(const Point2& p, std::span<const Point2> path) {
  if (path.size() == 1) return (p - path[0]).norm();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    best = std::min(best, point_segment_distance(p, path[i], path[i + 1]));
  return best;
}

double directed_hausdorff(std::span<const Point2> from,
                          std::span<const Point2> to) {
  double worst = 0.0;
  for (const auto& p : from) worst = std::max(worst, distance_to_path(p, to));
  return worst;
}

}  // namespace gearforge
