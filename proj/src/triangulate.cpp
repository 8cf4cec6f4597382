// Ear clipping for polygons with holes. Holes are joined to the outer ring
// by bridge edges (rightmost hole vertex first), then ears are cut from the
// resulting weakly simple ring.
#include <algorithm>
#include <cmath>
#include <numeric>

#include "gearforge/errors.hpp"
#include "gearforge/solidify.hpp"

namespace gearforge {
namespace {

double orient(const Point2& a, const Point2& b, const Point2& c) {
  return cross<double>(b - a, c - a);
}

bool same_point(const Point2& a, const Point2& b) { return a == b; }

// Closed triangle test (boundary counts as inside).
bool in_triangle(const Point2& p, const Point2& a, const Point2& b, const Point2& c) {
  return orient(a, b, p) >= 0.0 && orient(b, c, p) >= 0.0 && orient(c, a, p) >= 0.0;
}

class Bridger {
 public:
  Bridger(const std::vector<Point2>& pts, std::vector<std::uint32_t> ring)
      : pts_(pts), ring_(std::move(ring)) {}

  void add_hole(const std::vector<std::uint32_t>& hole) {
    // Rightmost hole vertex M.
    std::size_t m_pos = 0;
    for (std::size_t i = 1; i < hole.size(); ++i) {
      const Point2& a = pts_[hole[i]];
      const Point2& b = pts_[hole[m_pos]];
      if (a.x() > b.x() || (a.x() == b.x() && a.y() < b.y())) m_pos = i;
    }
    const Point2 m = pts_[hole[m_pos]];

    // Nearest ring edge hit by the ray from M towards +x.
    const std::size_t n = ring_.size();
    double best_x = std::numeric_limits<double>::infinity();
    std::size_t best_pos = n;
    for (std::size_t i = 0; i < n; ++i) {
      const Point2& a = pts_[ring_[i]];
      const Point2& b = pts_[ring_[(i + 1) % n]];
      if ((a.y() > m.y()) == (b.y() > m.y())) {
        if (a.y() == m.y() && a.x() >= m.x() && a.x() < best_x) {
          best_x = a.x();
          best_pos = i;
        }
        continue;
      }
      const double x = a.x() + (m.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (x < m.x() || x >= best_x) continue;
      best_x = x;
      // Candidate: the edge endpoint with the larger x.
      best_pos = (a.x() > b.x()) ? i : (i + 1) % n;
      if (a.y() == m.y()) best_pos = i;
      else if (b.y() == m.y()) best_pos = (i + 1) % n;
    }
    if (best_pos == n) throw ResolutionError("triangulate: hole is not inside the outer ring");

    // A reflex vertex inside triangle (M, I, P) blocks the bridge; take the
    // one with the smallest angle to the ray instead.
    const Point2 hit(best_x, m.y());
    const Point2 cand = pts_[ring_[best_pos]];
    if (!(same_point(cand, hit))) {
      double best_angle = std::numeric_limits<double>::infinity();
      double best_dist = best_angle;
      const Point2 a = m, b = hit, c = cand;
      const bool ccw = orient(a, b, c) > 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const Point2& p = pts_[ring_[i]];
        if (same_point(p, cand)) continue;
        const Point2& prev = pts_[ring_[(i + n - 1) % n]];
        const Point2& next = pts_[ring_[(i + 1) % n]];
        if (orient(prev, p, next) > 0.0) continue;  // convex
        const bool inside = ccw ? in_triangle(p, a, b, c) : in_triangle(p, a, c, b);
        if (!inside || p.x() < m.x()) continue;
        const Point2 d = p - m;
        const double angle = std::abs(std::atan2(d.y(), d.x()));
        const double dist = d.squaredNorm();
        if (angle < best_angle || (angle == best_angle && dist < best_dist)) {
          best_angle = angle;
          best_dist = dist;
          best_pos = i;
        }
      }
    }

    std::vector<std::uint32_t> spliced;
    spliced.reserve(n + hole.size() + 2);
    spliced.insert(spliced.end(), ring_.begin(), ring_.begin() + static_cast<long>(best_pos) + 1);
    for (std::size_t k = 0; k <= hole.size(); ++k)
      spliced.push_back(hole[(m_pos + k) % hole.size()]);
    spliced.insert(spliced.end(), ring_.begin() + static_cast<long>(best_pos), ring_.end());
    ring_ = std::move(spliced);
  }

  std::vector<std::uint32_t> take() { return std::move(ring_); }

 private:
  const std::vector<Point2>& pts_;
  std::vector<std::uint32_t> ring_;
};

std::vector<Triangle> clip_ears(const std::vector<Point2>& pts,
                                const std::vector<std::uint32_t>& ring) {
  const std::size_t n = ring.size();
  std::vector<Triangle> out;
  if (n < 3) return out;
  out.reserve(n - 2);
  std::vector<std::size_t> prev(n), next(n);
  for (std::size_t i = 0; i < n; ++i) {
    prev[i] = (i + n - 1) % n;
    next[i] = (i + 1) % n;
  }
  auto at = [&](std::size_t i) -> const Point2& { return pts[ring[i]]; };
  std::vector<char> reflex(n);
  auto update = [&](std::size_t i) { reflex[i] = orient(at(prev[i]), at(i), at(next[i])) <= 0.0; };
  for (std::size_t i = 0; i < n; ++i) update(i);

  auto is_ear = [&](std::size_t i) {
    if (reflex[i]) return false;
    const Point2 &a = at(prev[i]), &b = at(i), &c = at(next[i]);
    for (std::size_t j = next[next[i]]; j != prev[i]; j = next[j]) {
      if (!reflex[j]) continue;
      const Point2& p = at(j);
      if (same_point(p, a) || same_point(p, b) || same_point(p, c)) continue;
      if (in_triangle(p, a, b, c)) return false;
    }
    return true;
  };

  std::size_t remaining = n;
  std::size_t cur = 0;
  std::size_t stalled = 0;
  while (remaining > 3) {
    if (is_ear(cur)) {
      out.push_back({ring[prev[cur]], ring[cur], ring[next[cur]]});
      const std::size_t p = prev[cur], q = next[cur];
      next[p] = q;
      prev[q] = p;
      --remaining;
      update(p);
      update(q);
      cur = q;
      stalled = 0;
      continue;
    }
    cur = next[cur];
    if (++stalled > remaining) {
      // Numerically stuck: cut the least-reflex convex corner.
      std::size_t pick = n;
      double best = 0.0;
      std::size_t j = cur;
      for (std::size_t k = 0; k < remaining; ++k, j = next[j]) {
        const double o = orient(at(prev[j]), at(j), at(next[j]));
        if (o > best) {
          best = o;
          pick = j;
        }
      }
      if (pick == n) throw ResolutionError("triangulate: no ear left to clip");
      reflex[pick] = 0;
      cur = pick;
      // Force the clip on the next pass.
      out.push_back({ring[prev[cur]], ring[cur], ring[next[cur]]});
      const std::size_t p = prev[cur], q = next[cur];
      next[p] = q;
      prev[q] = p;
      --remaining;
      update(p);
      update(q);
      cur = q;
      stalled = 0;
    }
  }
  out.push_back({ring[prev[cur]], ring[cur], ring[next[cur]]});
  return out;
}

}  // namespace

std::vector<Triangle> triangulate(const ClosedPolygon& polygon) {
  std::vector<Point2> pts(polygon.outer.begin(), polygon.outer.end());
  std::vector<std::uint32_t> outer(polygon.outer.size());
  std::iota(outer.begin(), outer.end(), 0u);
  if (signed_area(polygon.outer) < 0.0) std::reverse(outer.begin(), outer.end());

  std::vector<std::vector<std::uint32_t>> holes;
  for (const auto& h : polygon.holes) {
    std::vector<std::uint32_t> idx(h.size());
    std::iota(idx.begin(), idx.end(), static_cast<std::uint32_t>(pts.size()));
    pts.insert(pts.end(), h.begin(), h.end());
    if (signed_area(h) > 0.0) std::reverse(idx.begin(), idx.end());
    holes.push_back(std::move(idx));
  }
  auto max_x = [&](const std::vector<std::uint32_t>& ring) {
    double x = -std::numeric_limits<double>::infinity();
    for (auto i : ring) x = std::max(x, pts[i].x());
    return x;
  };
  std::stable_sort(holes.begin(), holes.end(),
                   [&](const auto& a, const auto& b) { return max_x(a) > max_x(b); });

  Bridger bridger(pts, std::move(outer));
  for (const auto& h : holes) bridger.add_hole(h);
  return clip_ears(pts, bridger.take());
}

}  // namespace gearforge
