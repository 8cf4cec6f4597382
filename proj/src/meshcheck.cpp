#include "gearforge/meshcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <optional>
#include <ostream>
#include <thread>
#include <unordered_map>

#include "gearforge/errors.hpp"

namespace gearforge {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kWindowMargin = 0.05;  // rad beyond the lens of reach
constexpr double kTouchFloor = 1e-4;    // per unit module

double wrap_pm(double x) {
  x = std::remainder(x, kTwoPi);
  return x;
}

// Polygon plus what the simulator needs to crop it to the mesh zone.
class Shape {
 public:
  Shape(const ClosedPolygon& polygon, const Point2& center)
      : polygon_(polygon), center_(center) {
    const Ring& ring = polygon_.outer;
    angles_.reserve(ring.size());
    for (const auto& p : ring) {
      const Point2 d = p - center_;
      angles_.push_back(std::atan2(d.y(), d.x()));
      reach_ = std::max(reach_, d.norm());
    }
    double turn = 0.0;
    star_ = polygon_.holes.empty();
    for (std::size_t i = 0; i < ring.size() && star_; ++i) {
      const double step = wrap_pm(angles_[(i + 1) % ring.size()] - angles_[i]);
      if (step <= 0.0) star_ = false;
      turn += step;
    }
    star_ = star_ && std::abs(turn - kTwoPi) < 1e-6;
  }

  const ClosedPolygon& polygon() const { return polygon_; }
  const Point2& center() const { return center_; }
  double reach() const { return reach_; }

  // Slice of the shape between polar angles dir -+ half_width, closed
  // through the center. Empty when the shape is not star shaped about its
  // center or the window covers nearly all of it.
  std::optional<ClosedPolygon> pie(double dir, double half_width) const {
    if (!star_ || half_width >= 0.5 * kPi) return std::nullopt;
    const Ring& ring = polygon_.outer;
    const std::size_t n = ring.size();
    std::size_t start = 0;
    double best = kInf;
    for (std::size_t i = 0; i < n; ++i) {
      const double off = std::abs(wrap_pm(angles_[i] - dir));
      if (off < best) {
        best = off;
        start = i;
      }
    }
    auto inside = [&](std::size_t i) {
      return std::abs(wrap_pm(angles_[i] - dir)) <= half_width;
    };
    std::size_t fwd = 0, back = 0;
    while (fwd + back + 2 < n && inside((start + fwd + 1) % n)) ++fwd;
    while (fwd + back + 2 < n && inside((start + n - back - 1) % n)) ++back;
    if (fwd + back + 2 >= n) return std::nullopt;
    Ring out;
    out.reserve(fwd + back + 2);
    out.push_back(center_);
    for (std::size_t k = 0; k <= fwd + back; ++k) out.push_back(ring[(start + n - back + k) % n]);
    return ClosedPolygon{std::move(out), {}};
  }

 private:
  ClosedPolygon polygon_;
  Point2 center_;
  std::vector<double> angles_;
  double reach_ = 0.0;
  bool star_ = false;
};

// Half angle, seen from the center of the first shape, of the lens where
// the two reach disks overlap.
double lens_half_angle(double r_self, double r_other, double a) {
  const double c = (r_self * r_self + a * a - r_other * r_other) / (2.0 * a * r_self);
  if (c >= 1.0) return 0.0;
  if (c <= -1.0) return kPi;
  return std::acos(c);
}

bool side_clear(const Ring& pie, const Point2& other_center, double other_reach) {
  const Point2& c = pie.front();
  return point_segment_distance(other_center, c, pie[1]) > other_reach &&
         point_segment_distance(other_center, c, pie.back()) > other_reach;
}

struct Nearest {
  double distance = kInf;
  Point2 point = Point2::Zero();
};

// Boundary segments bucketed on a uniform grid; lookups only see segments
// within `cutoff` of the query point.
class SegmentSet {
 public:
  SegmentSet() = default;
  explicit SegmentSet(double cutoff) : cell_(cutoff) {}

  void add(const Point2& a, const Point2& b) {
    const auto id = static_cast<std::uint32_t>(segments_.size());
    segments_.emplace_back(a, b);
    const auto [i0, j0] = cell_of(a.cwiseMin(b));
    const auto [i1, j1] = cell_of(a.cwiseMax(b));
    for (long i = i0; i <= i1; ++i)
      for (long j = j0; j <= j1; ++j) cells_[key(i, j)].push_back(id);
  }

  bool empty() const { return segments_.empty(); }

  Nearest nearest(const Point2& p) const {
    Nearest out;
    const auto [i0, j0] = cell_of(p - Point2::Constant(cell_));
    const auto [i1, j1] = cell_of(p + Point2::Constant(cell_));
    for (long i = i0; i <= i1; ++i)
      for (long j = j0; j <= j1; ++j) {
        const auto it = cells_.find(key(i, j));
        if (it == cells_.end()) continue;
        for (const auto id : it->second) {
          const auto& [a, b] = segments_[id];
          const Point2 q = project_onto_segment(p, a, b);
          const double d = (q - p).norm();
          if (d < out.distance) out = Nearest{d, q};
        }
      }
    if (out.distance > cell_) out = Nearest{};
    return out;
  }

 private:
  std::pair<long, long> cell_of(const Point2& p) const {
    return {static_cast<long>(std::floor(p.x() / cell_)),
            static_cast<long>(std::floor(p.y() / cell_))};
  }
  static std::uint64_t key(long i, long j) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
           static_cast<std::uint32_t>(j);
  }

  double cell_ = 1.0;
  std::vector<std::pair<Point2, Point2>> segments_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells_;
};

class Scene {
 public:
  Scene(const ClosedPolygon& a, const ClosedPolygon& b, double center_distance)
      : a_(a, Point2::Zero()), b_(b, Point2(center_distance, 0.0)), dist_(center_distance) {
    apart_ = center_distance >= a_.reach() + b_.reach();
    wa_ = lens_half_angle(a_.reach(), b_.reach(), dist_) + kWindowMargin;
    wb_ = lens_half_angle(b_.reach(), a_.reach(), dist_) + kWindowMargin;
  }

  RigidPose pose_a(double theta1) const { return RigidPose::about(a_.center(), theta1); }
  RigidPose pose_b(double psi) const { return RigidPose::about(b_.center(), -psi); }

  PolygonSet overlap(double theta1, double psi) const {
    if (apart_) return {};
    const ClosedPolygon pa = crop(a_, b_, pose_a(theta1), -theta1, wa_);
    const ClosedPolygon pb = crop(b_, a_, pose_b(psi), kPi + psi, wb_);
    return polygon_boolean(BooleanOp::Intersection, {pa}, {pb});
  }

  double overlap_area(double theta1, double psi) const { return area(overlap(theta1, psi)); }

  MeshStep measure(double theta1, double psi, double tolerance) const {
    MeshStep step;
    step.theta1 = theta1;
    step.theta2 = psi;
    const PolygonSet common = overlap(theta1, psi);
    step.overlap_area = area(common);
    if (step.overlap_area > 0.0) step.max_penetration_depth = inradius(common);

    const Ring ra = transformed(a_.polygon().outer, pose_a(theta1));
    const Ring rb = transformed(b_.polygon().outer, pose_b(psi));
    double reach = std::max(dist_ - a_.reach() - b_.reach(), 0.0) + tolerance;
    double gap = kInf;
    std::vector<double> da, db;
    SegmentSet sa, sb;
    for (;;) {
      sa = segments_near(ra, b_.center(), b_.reach() + reach, reach);
      sb = segments_near(rb, a_.center(), a_.reach() + reach, reach);
      da = vertex_distances(ra, b_.center(), b_.reach() + reach, sb);
      db = vertex_distances(rb, a_.center(), a_.reach() + reach, sa);
      gap = std::min(*std::min_element(da.begin(), da.end()),
                     *std::min_element(db.begin(), db.end()));
      if (gap <= reach) break;
      reach *= 2.0;
    }
    step.min_contact_gap = (step.overlap_area > 0.0) ? 0.0 : gap;

    add_contacts(ra, da, sb, tolerance, step);
    add_contacts(rb, db, sa, tolerance, step);
    return step;
  }

 private:
  ClosedPolygon crop(const Shape& self, const Shape& other, const RigidPose& pose,
                     double local_dir, double half_width) const {
    if (auto slice = self.pie(local_dir, half_width)) {
      ClosedPolygon posed = transformed(*slice, pose);
      if (side_clear(posed.outer, other.center(), other.reach())) return posed;
    }
    ClosedPolygon whole = transformed(self.polygon(), pose);
    if (half_width >= 0.5 * kPi) return whole;
    // Not star shaped: cut a wedge out with a boolean instead.
    const double far = 1.01 * self.reach() / std::cos(half_width);
    const double dir = local_dir + pose.rotation;
    const Point2 c = pose(self.center());
    const Ring sides{c, c + self.reach() * unit_direction(dir - half_width),
                     c + self.reach() * unit_direction(dir + half_width)};
    if (!side_clear(sides, other.center(), other.reach())) return whole;
    Ring wedge{c, c + far * unit_direction(dir - half_width), c + far * unit_direction(dir),
               c + far * unit_direction(dir + half_width)};
    PolygonSet cut = polygon_boolean(BooleanOp::Intersection, {whole},
                                     {make_polygon(std::move(wedge))});
    if (cut.size() != 1) return whole;
    return std::move(cut.front());
  }

  static SegmentSet segments_near(const Ring& ring, const Point2& center, double radius,
                                  double cutoff) {
    SegmentSet out(cutoff);
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point2& p = ring[i];
      const Point2& q = ring[(i + 1) % n];
      if (point_segment_distance(center, p, q) <= radius) out.add(p, q);
    }
    return out;
  }

  // Distance of every ring vertex to `others`; infinite for vertices
  // outside the candidate disk or beyond the grid cutoff.
  static std::vector<double> vertex_distances(const Ring& ring, const Point2& center,
                                              double radius, const SegmentSet& others) {
    std::vector<double> out(ring.size(), kInf);
    if (others.empty()) return out;
    for (std::size_t i = 0; i < ring.size(); ++i)
      if ((ring[i] - center).norm() <= radius) out[i] = others.nearest(ring[i]).distance;
    return out;
  }

  // One contact per run of consecutive vertices within tolerance, placed
  // midway between the refined closest pair.
  static void add_contacts(const Ring& ring, const std::vector<double>& d,
                           const SegmentSet& others, double tolerance, MeshStep& step) {
    auto& contacts = step.contact_points;
    const std::size_t n = ring.size();
    auto near = [&](std::size_t i) { return d[i] <= tolerance; };
    std::size_t first = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!near(i)) {
        first = i;
        break;
      }
    if (first == n) return;  // whole ring in contact; nothing sensible to report
    for (std::size_t k = 1; k <= n; ++k) {
      const std::size_t i = (first + k) % n;
      if (!near(i)) continue;
      std::size_t best = i;
      std::size_t j = i;
      while (near(j)) {
        if (d[j] < d[best]) best = j;
        j = (j + 1) % n;
        ++k;
      }
      const std::size_t prev = (best + n - 1) % n, next = (best + 1) % n;
      const double dm = others.nearest(ring[prev]).distance;
      const double dp = others.nearest(ring[next]).distance;
      const double curv = dm - 2.0 * d[best] + dp;
      double u = (std::isfinite(curv) && curv > 0.0) ? 0.5 * (dm - dp) / curv : 0.0;
      u = std::clamp(u, -0.5, 0.5);
      Point2 p = (u < 0.0) ? ring[best] + (-u) * (ring[prev] - ring[best])
                           : ring[best] + u * (ring[next] - ring[best]);
      Nearest q = others.nearest(p);
      if (!std::isfinite(q.distance)) {
        p = ring[best];
        q = others.nearest(p);
      }
      const Point2 mid = 0.5 * (p + q.point);
      const bool seen = std::any_of(contacts.begin(), contacts.end(), [&](const Point2& c) {
        return (c - mid).norm() <= tolerance;
      });
      if (!seen) {
        contacts.push_back(mid);
        step.contact_gaps.push_back(std::min(q.distance, d[best]));
      }
    }
  }

  Shape a_;
  Shape b_;
  double dist_;
  bool apart_ = false;
  double wa_ = 0.0;
  double wb_ = 0.0;
};

// Least forward turn of B, starting from psi, that leaves the overlap at or
// below `eps`. Golden-section search for the overlap minimum on
// [psi, psi + span], then bisection for the first clear angle before it.
double push(const Scene& scene, double theta1, double psi, double span, double eps) {
  auto f = [&](double x) { return scene.overlap_area(theta1, x); };
  if (f(psi) <= eps) return psi;
  const double tol = 1e-11 * std::max(1.0, std::abs(psi));
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = psi, hi = psi + span;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 <= eps) {
      hi = x1;
      break;
    }
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  if (f(hi) > eps) return hi;
  lo = psi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) <= eps ? hi : lo) = mid;
  }
  return hi;
}

void format_point(std::ostream& out, const Point2& p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f,%.6f", p.x(), p.y());
  out << buf;
}

void format_number(std::ostream& out, double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9f", x);
  out << buf;
}

}  // namespace

MeshSummary MeshReport::summary() const {
  MeshSummary s;
  s.min_min_gap = steps.empty() ? 0.0 : kInf;
  for (const auto& step : steps) {
    s.max_penetration_depth = std::max(s.max_penetration_depth, step.max_penetration_depth);
    s.max_min_gap = std::max(s.max_min_gap, step.min_contact_gap);
    s.min_min_gap = std::min(s.min_min_gap, step.min_contact_gap);
    s.max_overlap_area = std::max(s.max_overlap_area, step.overlap_area);
    if (step.contact_points.empty()) ++s.steps_without_contact;
  }
  return s;
}

MeshReport simulate_pair(const ClosedPolygon& a, const ClosedPolygon& b,
                         double center_distance, const MotionLaw& law, int n_steps,
                         const MeshOptions& options) {
  if (n_steps < 1) throw InvalidInput("simulate_pair: n_steps must be >= 1");
  if (!(center_distance > 0.0)) throw InvalidInput("simulate_pair: center distance must be > 0");
  const Scene scene(a, b, center_distance);
  MeshReport report;
  report.steps.resize(static_cast<std::size_t>(n_steps));
  const int workers = static_cast<int>(std::clamp(std::thread::hardware_concurrency(), 1u, 16u));
  std::vector<std::future<void>> jobs;
  for (int w = 0; w < workers; ++w)
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (int k = w; k < n_steps; k += workers) {
        const double theta1 = kTwoPi * k / n_steps;
        report.steps[static_cast<std::size_t>(k)] =
            scene.measure(theta1, law(theta1), options.contact_tolerance);
      }
    }));
  for (auto& job : jobs) job.get();
  return report;
}

ClosedPolygon placed_gear2(const GearAssembly& assembly) {
  const RigidPose pose{assembly.phase2, Point2::Zero(), Point2(assembly.center_distance, 0.0)};
  return transformed(assembly.gear2.boundary, pose);
}

MeshReport simulate_assembly(const GearAssembly& assembly, int n_steps) {
  MeshOptions options;
  options.contact_tolerance = 0.02 * assembly.gear1.spec.module;
  const ClosedPolygon gear1 =
      transformed(assembly.gear1.boundary, RigidPose::about(Point2::Zero(), assembly.phase1));
  return simulate_pair(gear1, placed_gear2(assembly), assembly.center_distance,
                       assembly.law(), n_steps, options);
}

double line_of_action_error(const GearAssembly& assembly, const MeshReport& report) {
  // Near-contact loci include tip corners peeling off a flank after the
  // path of contact ends; only points touching at the resolution level of
  // the worst step count.
  const double touch = std::max(report.summary().max_min_gap,
                                kTouchFloor * assembly.gear1.spec.module);
  const double alpha = assembly.gear1.spec.pressure_angle;
  const Point2 pitch_point(assembly.gear1.pitch_radius, 0.0);
  const Point2 up(std::sin(alpha), std::cos(alpha));
  const Point2 down(-std::sin(alpha), std::cos(alpha));
  double worst = -1.0;
  for (const auto& step : report.steps)
    for (std::size_t i = 0; i < step.contact_points.size(); ++i) {
      if (step.contact_gaps[i] > touch) continue;
      const Point2 d = step.contact_points[i] - pitch_point;
      const double e = std::min(std::abs(cross<double>(up, d)), std::abs(cross<double>(down, d)));
      worst = std::max(worst, e);
    }
  if (worst < 0.0) throw InvalidInput("line_of_action_error: report has no contact points");
  return worst;
}

RatioMeasurement measure_ratio(const ClosedPolygon& a, const ClosedPolygon& b,
                               double center_distance, int n_steps) {
  if (n_steps < 2) throw InvalidInput("measure_ratio: n_steps must be >= 2");
  const Scene scene(a, b, center_distance);
  const double ra = std::sqrt(area(a) / kPi), rb = std::sqrt(area(b) / kPi);
  const double eps = 1e-12 * ra * rb;
  const double dtheta = kTwoPi / n_steps;
  // Pitch radii estimated from areas bound the per-step advance well.
  const double span = 4.0 * dtheta * std::max(ra / rb, 1.0);
  RatioMeasurement out;
  out.driven_angles.reserve(static_cast<std::size_t>(n_steps) + 1);
  double psi = push(scene, 0.0, 0.0, span, eps);
  out.driven_angles.push_back(psi);
  for (int k = 1; k <= n_steps; ++k) {
    psi = push(scene, dtheta * k, psi, span, eps);
    out.driven_angles.push_back(psi);
  }
  out.mean_ratio = (out.driven_angles.back() - out.driven_angles.front()) / kTwoPi;
  return out;
}

void write_report(const MeshReport& report, std::ostream& out) {
  out << "step\ttheta1\ttheta2\tmax_penetration_depth\tmin_contact_gap\t"
         "overlap_area\tcontact_count\tcontact_points\n";
  for (std::size_t k = 0; k < report.steps.size(); ++k) {
    const MeshStep& s = report.steps[k];
    out << k << '\t';
    format_number(out, s.theta1);
    out << '\t';
    format_number(out, s.theta2);
    out << '\t';
    format_number(out, s.max_penetration_depth);
    out << '\t';
    format_number(out, s.min_contact_gap);
    out << '\t';
    format_number(out, s.overlap_area);
    out << '\t' << s.contact_points.size() << '\t';
    for (std::size_t i = 0; i < s.contact_points.size(); ++i) {
      if (i) out << ';';
      format_point(out, s.contact_points[i]);
    }
    out << '\n';
  }
}

void write_report(const MeshReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_report(report, out);
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace gearforge
