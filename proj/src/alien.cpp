#include "gearforge/alien.hpp"

#include <cmath>
#include <sstream>

#include "gearforge/acircular.hpp"
#include "gearforge/errors.hpp"

namespace gearforge {

TurnRatio TurnRatio::from(double ratio) {
  if (!(ratio > 0.0) || !std::isfinite(ratio))
    throw InvalidInput("turn ratio must be positive and finite");
  const Fraction f = rationalize(ratio, 1000, 1e-9);
  if (f.den == 0) {
    std::ostringstream msg;
    msg << "turn ratio " << ratio << " does not close within 1000 turns";
    throw CycleError(msg.str());
  }
  return TurnRatio{f.num, f.den};
}

RigidPose driven_frame_pose(const Point2& c1, const Point2& c2, double ratio,
                            double phi) {
  // Undo the driven rotation (-ratio*phi about c2) after the driver's.
  return RigidPose::about(c1, phi).then(RigidPose::about(c2, ratio * phi));
}

std::vector<ClosedPolygon> sweep_in_driven_frame(const ClosedPolygon& s1,
                                                 const Point2& c1, const Point2& c2,
                                                 double ratio, int n_samples) {
  if (n_samples < 2) throw InvalidInput("sweep needs at least 2 samples");
  if ((c1 - c2).norm() <= kSnapTolerance)
    throw InvalidInput("sweep: centers must differ");
  validate(s1);
  const TurnRatio turns = TurnRatio::from(ratio);
  std::vector<ClosedPolygon> poses;
  poses.reserve(static_cast<std::size_t>(n_samples));
  for (int k = 0; k < n_samples; ++k) {
    const double phi = kTwoPi * static_cast<double>(k) * turns.den / n_samples;
    poses.push_back(transformed(s1, driven_frame_pose(c1, c2, turns.value(), phi)));
  }
  return poses;
}

ClosedPolygon carve_conjugate(const ClosedPolygon& s1, const Point2& c1,
                              const Point2& c2, double ratio,
                              const CarveOptions& options) {
  const auto poses = sweep_in_driven_frame(s1, c1, c2, ratio, options.n_samples);
  const PolygonSet swept = union_all(poses);

  const Ring* hole = nullptr;
  for (const auto& part : swept) {
    for (const auto& h : part.holes) {
      if (contains(ClosedPolygon{h, {}}, c2)) {
        hole = &h;
        break;
      }
    }
    if (hole) break;
  }
  if (!hole)
    throw Infeasible("carve_conjugate: the sweep leaves no hole around the driven center");

  ClosedPolygon carved = make_polygon(*hole);
  for (const auto& part : swept) {
    if (contains(carved, part.outer.front()) && !contains(part, c2))
      carved.holes.push_back(part.outer);
  }
  carved = make_polygon(carved.outer, carved.holes);
  if (options.collapse_collinear) carved = remove_collinear(carved, 1e-6);
  return carved;
}

}  // namespace gearforge
