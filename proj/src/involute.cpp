#include "gearforge/involute.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "gearforge/errors.hpp"
#include "gearforge/numerics.hpp"

namespace gearforge {
namespace {

void push_unique(Ring& ring, const Point2& p) {
  if (ring.empty() || (ring.back() - p).norm() > kSnapTolerance)
    ring.push_back(p);
}

// Replicate one tooth (points in counterclockwise order, spanning the
// angular window [-pi/n, pi/n)) n times around the origin.
ClosedPolygon replicate_tooth(const Ring& tooth, int n) {
  Ring outer;
  outer.reserve(tooth.size() * static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const Eigen::Rotation2Dd rot(kTwoPi * k / n);
    for (const auto& p : tooth) push_unique(outer, rot * p);
  }
  while (outer.size() > 1 && (outer.front() - outer.back()).norm() <= kSnapTolerance)
    outer.pop_back();
  return ClosedPolygon{std::move(outer), {}};
}

// Arc of radius r from angle a0 to a1 (a1 > a0), excluding the start point.
void append_arc(Ring& ring, double r, double a0, double a1, int segments) {
  for (int i = 1; i <= segments; ++i)
    push_unique(ring, r * unit_direction(a0 + (a1 - a0) * i / segments));
}

}  // namespace

double GearSpec::undercut_threshold() const {
  const double s = std::sin(pressure_angle);
  return 2.0 * addendum_coef / (s * s);
}

void GearSpec::validate() const {
  std::ostringstream msg;
  if (teeth < 4) msg << "teeth must be >= 4 (got " << teeth << ")";
  else if (!(module > 0.0)) msg << "module must be > 0";
  else if (!(pressure_angle > 0.0 && pressure_angle < 0.5 * kPi))
    msg << "pressure angle must lie in (0, 90) degrees";
  else if (addendum_coef < 0.0 || cutout_coef < 0.0)
    msg << "addendum and cutout coefficients must be >= 0";
  else if (dedendum_coef < addendum_coef)
    msg << "dedendum coefficient must be >= addendum coefficient";
  else if (root_radius() <= 0.0)
    msg << "tooth depth exceeds the pitch radius";
  if (!msg.str().empty()) throw InvalidInput("gear spec: " + msg.str());
}

void RackSpec::validate() const {
  std::ostringstream msg;
  if (!(module > 0.0)) msg << "module must be > 0";
  else if (!(pressure_angle >= 0.0 && pressure_angle < 0.5 * kPi))
    msg << "pressure angle must lie in [0, 90) degrees";
  else if (tooth_count < 1) msg << "tooth count must be >= 1";
  else if (addendum_coef <= 0.0 || dedendum_coef <= 0.0)
    msg << "addendum and dedendum must be > 0";
  else {
    const double t = std::tan(pressure_angle);
    if (0.25 * pitch() - addendum_coef * module * t <= 0.0)
      msg << "crown vanishes: pressure angle too large for this addendum";
    else if (0.25 * pitch() - dedendum_coef * module * t <= 0.0)
      msg << "trough vanishes: pressure angle too large for this dedendum";
  }
  if (!msg.str().empty()) throw InvalidInput("rack spec: " + msg.str());
}

Point2 polyline_unit_tangent(const Polyline& gamma, double t) {
  const auto& pts = gamma.points();
  const std::size_t last = pts.size() - 1;
  auto vertex_tangent = [&](std::size_t i) -> Point2 {
    if (i == 0) return (pts[1] - pts[0]).normalized();
    if (i == last) return (pts[last] - pts[last - 1]).normalized();
    const Point2 in = (pts[i] - pts[i - 1]).normalized();
    const Point2 out = (pts[i + 1] - pts[i]).normalized();
    const Point2 sum = in + out;
    return sum.norm() > 1e-12 ? Point2(sum.normalized()) : out;
  };
  t = std::clamp(t, 0.0, gamma.parameter_end());
  const std::size_t i = std::min(static_cast<std::size_t>(t), last - 1);
  const double u = t - static_cast<double>(i);
  const Point2 blend = (1.0 - u) * vertex_tangent(i) + u * vertex_tangent(i + 1);
  return blend.norm() > 1e-12 ? Point2(blend.normalized()) : vertex_tangent(i + 1);
}

Point2 involute_of_curve(const Polyline& gamma, double t0, double t) {
  if (t < t0) throw InvalidInput("involute_of_curve: t must be >= t0");
  if (t0 < 0.0 || t > gamma.parameter_end())
    throw InvalidInput("involute_of_curve: parameter outside the curve");
  const double unwound = gamma.length_to(t) - gamma.length_to(t0);
  return gamma.at(t) - polyline_unit_tangent(gamma, t) * unwound;
}

Polyline make_rack_profile(const RackSpec& spec) {
  spec.validate();
  const double p = spec.pitch();
  const double ha = spec.addendum_coef * spec.module;
  const double hd = spec.dedendum_coef * spec.module;
  const double t = std::tan(spec.pressure_angle);
  std::vector<Point2> pts;
  auto add = [&](double x, double y) {
    const Point2 q(x, y);
    if (pts.empty() || (pts.back() - q).norm() > kSnapTolerance) pts.push_back(q);
  };
  add(-0.5 * p, -hd);
  for (int k = 0; k < spec.tooth_count; ++k) {
    const double c = k * p;
    add(c - 0.25 * p - hd * t, -hd);
    add(c - 0.25 * p + ha * t, ha);
    add(c + 0.25 * p - ha * t, ha);
    add(c + 0.25 * p + hd * t, -hd);
  }
  add((spec.tooth_count - 0.5) * p, -hd);
  return Polyline(std::move(pts));
}

GearProfile make_spur_profile(const GearSpec& spec,
                              const ProfileOptions& options) {
  spec.validate();
  const int n = spec.teeth;
  const double rb = spec.base_radius();
  const double ra = spec.addendum_radius();
  const double rf = spec.root_radius();
  const double inv_alpha = involute_function(spec.pressure_angle);
  const double half_pitch_angle = kPi / (2.0 * n);

  GearProfile profile;
  profile.spec = spec;
  profile.pitch_radius = spec.pitch_radius();
  profile.base_radius = rb;
  if (n < spec.undercut_threshold()) {
    std::ostringstream msg;
    msg << "teeth = " << n << " is below the undercut threshold ("
        << spec.undercut_threshold()
        << "); closed-form flank clipped at the dedendum circle";
    profile.warnings.push_back(msg.str());
  }

  // Half-angle of the tooth at radius rho on the involute flank.
  auto half_angle = [&](double rho) {
    const double alpha_rho = std::acos(std::min(1.0, rb / rho));
    return half_pitch_angle + inv_alpha - involute_function(alpha_rho);
  };

  const double flank_start = std::max(rb, rf);
  double tip = ra;
  if (half_angle(ra) <= 0.0) {
    // Pointed tooth: stop where the two flanks meet.
    tip = find_root(half_angle, flank_start, ra, 1e-13);
  }
  const double roll0 = involute_roll_at_radius(rb, flank_start);
  const double roll1 = involute_roll_at_radius(rb, tip);
  const int fs = std::max(options.flank_samples, 2);

  // Upper flank (positive angles) from root to tip.
  std::vector<Point2> upper;
  if (rf < rb) upper.push_back(rf * unit_direction(half_angle(rb)));
  for (int i = 0; i < fs; ++i) {
    const double roll = roll0 + (roll1 - roll0) * i / (fs - 1);
    const double rho = rb * std::sqrt(1.0 + roll * roll);
    upper.push_back(rho * unit_direction(half_angle(std::min(rho, tip))));
  }

  Ring tooth;
  const double root_half = std::atan2(upper.front().y(), upper.front().x());
  // Root arc from the window edge to the lower flank start.
  const double window = kPi / n;
  push_unique(tooth, rf * unit_direction(-window));
  append_arc(tooth, rf, -window, -root_half, std::max(options.arc_samples / 2, 1));
  for (const auto& q : upper) push_unique(tooth, Point2(q.x(), -q.y()));
  const double tip_half = std::atan2(upper.back().y(), upper.back().x());
  if (tip_half > 0.0)
    append_arc(tooth, tip, -tip_half, tip_half, options.arc_samples);
  for (auto it = upper.rbegin(); it != upper.rend(); ++it) push_unique(tooth, *it);
  append_arc(tooth, rf, root_half, window, std::max(options.arc_samples / 2, 1));
  tooth.pop_back();  // window edge belongs to the next tooth

  profile.boundary = replicate_tooth(tooth, n);
  return profile;
}

GearProfile make_trapezoid_profile(const GearSpec& spec,
                                   const ProfileOptions& options) {
  spec.validate();
  const int n = spec.teeth;
  const double R = spec.pitch_radius();
  const double ra = spec.addendum_radius();
  const double rf = spec.root_radius();
  const double p = spec.circular_pitch();
  const double t = std::tan(spec.pressure_angle);
  const int fs = std::max(options.flank_samples, 2);

  // Rack flank x(y) = p/4 - y tan(alpha), bent so x becomes arc length on
  // the pitch circle and y radial height.
  auto half_angle = [&](double rho) { return (0.25 * p - (rho - R) * t) / R; };
  std::vector<Point2> upper;
  for (int i = 0; i < fs; ++i) {
    const double rho = rf + (ra - rf) * i / (fs - 1);
    upper.push_back(rho * unit_direction(half_angle(rho)));
  }
  Ring tooth;
  const double window = kPi / n;
  push_unique(tooth, rf * unit_direction(-window));
  append_arc(tooth, rf, -window, -half_angle(rf), std::max(options.arc_samples / 2, 1));
  for (const auto& q : upper) push_unique(tooth, Point2(q.x(), -q.y()));
  append_arc(tooth, ra, -half_angle(ra), half_angle(ra), options.arc_samples);
  for (auto it = upper.rbegin(); it != upper.rend(); ++it) push_unique(tooth, *it);
  append_arc(tooth, rf, half_angle(rf), window, std::max(options.arc_samples / 2, 1));
  tooth.pop_back();

  GearProfile profile;
  profile.spec = spec;
  profile.pitch_radius = R;
  profile.base_radius = spec.base_radius();
  profile.boundary = replicate_tooth(tooth, n);
  return profile;
}

GearAssembly assemble_pair(const GearSpec& spec1, const GearSpec& spec2,
                           const ProfileOptions& options) {
  if (std::abs(spec1.module - spec2.module) > 1e-12 * spec1.module ||
      std::abs(spec1.pressure_angle - spec2.pressure_angle) > 1e-12)
    throw Incompatible(
        "assemble_pair: gears must share module and pressure angle");
  GearAssembly out;
  out.gear1 = make_spur_profile(spec1, options);
  out.gear2 = make_spur_profile(spec2, options);
  out.center_distance = 0.5 * spec1.module * (spec1.teeth + spec2.teeth);
  out.ratio = static_cast<double>(spec1.teeth) / spec2.teeth;
  // Gap centre of gear 2 must point back along -x towards gear 1.
  const double period = kTwoPi / spec2.teeth;
  out.phase2 = std::fmod(kPi - kPi / spec2.teeth, period);
  if (out.phase2 < 0.0) out.phase2 += period;
  return out;
}

}  // namespace gearforge
