#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace gearforge {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

using Point2 = Eigen::Vector2d;
using Ring = std::vector<Point2>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Vertex-welding distance for the polygon kernel, in millimetres.
inline constexpr double kSnapTolerance = 1e-9;

template <typename Scalar>
Vec2<Scalar> unit_direction(Scalar angle) {
  using std::cos;
  using std::sin;
  return Vec2<Scalar>(cos(angle), sin(angle));
}

template <typename Scalar>
Vec2<Scalar> rotated(const Vec2<Scalar>& p, Scalar angle,
                     const Vec2<Scalar>& pivot = Vec2<Scalar>::Zero()) {
  return Eigen::Rotation2D<Scalar>(angle) * (p - pivot) + pivot;
}

// z-component of the planar cross product.
template <typename Scalar>
Scalar cross(const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
  return a.x() * b.y() - a.y() * b.x();
}

template <typename Scalar>
Vec2<Scalar> left_normal(const Vec2<Scalar>& v) {
  return Vec2<Scalar>(-v.y(), v.x());
}

// Rotation by `rotation` about `pivot`, followed by `translation`.
struct RigidPose {
  double rotation = 0.0;
  Point2 pivot = Point2::Zero();
  Point2 translation = Point2::Zero();

  static RigidPose about(const Point2& pivot, double angle) {
    return RigidPose{angle, pivot, Point2::Zero()};
  }

  Eigen::Isometry2d isometry() const {
    Eigen::Isometry2d iso = Eigen::Isometry2d::Identity();
    iso.linear() = Eigen::Rotation2Dd(rotation).toRotationMatrix();
    iso.translation() = pivot - iso.linear() * pivot + translation;
    return iso;
  }

  Point2 operator()(const Point2& p) const { return isometry() * p; }

  // `next` applied after `*this`.
  RigidPose then(const RigidPose& next) const {
    Eigen::Isometry2d combined = next.isometry() * isometry();
    return RigidPose{next.rotation + rotation, Point2::Zero(),
                     combined.translation()};
  }

  RigidPose inverse() const {
    Eigen::Isometry2d inv = isometry().inverse();
    return RigidPose{-rotation, Point2::Zero(), inv.translation()};
  }
};

Ring transformed(const Ring& ring, const RigidPose& pose);

// Open polyline parametrised by fractional vertex index t in [0, size()-1].
class Polyline {
 public:
  explicit Polyline(std::vector<Point2> points);

  const std::vector<Point2>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  std::size_t segment_count() const { return points_.size() - 1; }
  double parameter_end() const { return static_cast<double>(segment_count()); }

  Point2 at(double t) const;
  // Unit tangent of the segment containing t (the left segment at vertices,
  // except at t = 0).
  Point2 tangent(double t) const;
  // Arclength from the first vertex to parameter t.
  double length_to(double t) const;
  double length() const { return cumulative_.back(); }

 private:
  std::size_t segment_of(double t) const;

  std::vector<Point2> points_;
  std::vector<double> cumulative_;
};

// Periodic pitch curve r(theta), piecewise linear in (theta, r).
class PolarCurve {
 public:
  PolarCurve(std::vector<double> theta, std::vector<double> radius);

  // n uniform samples of f over [0, 2pi).
  static PolarCurve sample(const std::function<double(double)>& f,
                           std::size_t n);

  double operator()(double theta) const;
  // dr/dtheta of the linear piece containing theta.
  double slope(double theta) const;
  Point2 point(double theta) const {
    return (*this)(theta) * unit_direction(theta);
  }

  std::span<const double> thetas() const { return theta_; }
  std::span<const double> radii() const { return radius_; }
  std::size_t size() const { return theta_.size(); }
  double min_radius() const;
  double max_radius() const;

  // Arclength of one full turn.
  double perimeter() const { return cumulative_.back(); }
  // Arclength from theta = 0 to theta (any real theta; whole turns count).
  double arclength_to(double theta) const;
  // Inverse of arclength_to: the theta reached after travelling s.
  double theta_at_arclength(double s) const;

  PolarCurve scaled(double factor) const;
  Ring to_ring() const;

 private:
  // Index i of the knot interval [theta_i, theta_{i+1}) holding a reduced
  // angle in [0, 2pi); the last interval wraps to 2pi.
  std::size_t piece_of(double reduced) const;
  double knot_theta(std::size_t i) const;
  double knot_radius(std::size_t i) const;
  double piece_arclength(std::size_t i, double from, double to) const;

  std::vector<double> theta_;
  std::vector<double> radius_;
  std::vector<double> cumulative_;  // size n + 1; cumulative_[n] = perimeter
};

double arclength(const Polyline& curve, double from, double to);
double arclength(const PolarCurve& curve, double from, double to);

// Wrap an angle into [0, 2pi).
double wrap_angle(double theta);

double signed_area(std::span<const Point2> ring);
double point_segment_distance(const Point2& p, const Point2& a,
                              const Point2& b);
// Closest point on segment ab to p.
Point2 project_onto_segment(const Point2& p, const Point2& a,
                            const Point2& b);
// Distance from p to a closed ring.
double distance_to_ring(const Point2& p, std::span<const Point2> ring);
// Distance from p to an open polyline.
double distance_to_path(const Point2& p, std::span<const Point2> path);

// Max over `from` of the distance to the open polyline `to`.
double directed_hausdorff(std::span<const Point2> from,
                          std::span<const Point2> to);

}  // namespace gearforge
