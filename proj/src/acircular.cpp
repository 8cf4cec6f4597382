#include "gearforge/acircular.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gearforge/errors.hpp"
#include "gearforge/numerics.hpp"

namespace gearforge {
namespace {

// -log1p(-u) / u, continuous at u = 0.
double log_ratio(double u) {
  if (std::abs(u) < 1e-6) return 1.0 + u * (0.5 + u / 3.0);
  return -std::log1p(-u) / u;
}

// Exact integral of r / (a - r) over [t0, t0 + h] for r linear from r0 with
// slope k.
double piece_rate_integral(double a, double r0, double k, double h) {
  const double gap = a - r0;
  return a * (h / gap) * log_ratio(k * h / gap) - h;
}

// Cumulative driven angle at the knots of a piecewise-linear r1.
class DrivenIntegral {
 public:
  DrivenIntegral(const PolarCurve& r1, double a) : r1_(r1), a_(a) {
    if (!(r1.max_radius() < a)) {
      std::ostringstream msg;
      msg << "pitch curve radius " << r1.max_radius()
          << " reaches the center distance " << a;
      throw Infeasible(msg.str());
    }
    const auto th = r1.thetas();
    cumulative_.resize(th.size() + 1, 0.0);
    for (std::size_t i = 0; i < th.size(); ++i) {
      const double t1 = (i + 1 == th.size()) ? kTwoPi : th[i + 1];
      cumulative_[i + 1] = cumulative_[i] + partial(i, t1);
    }
  }

  double turn() const { return cumulative_.back(); }

  double operator()(double theta1) const {
    const double turns = std::floor(theta1 / kTwoPi);
    const double t = wrap_angle(theta1);
    const auto th = r1_.thetas();
    auto it = std::upper_bound(th.begin(), th.end(), t);
    const std::size_t i = static_cast<std::size_t>(std::distance(th.begin(), it)) - 1;
    return turns * turn() + cumulative_[i] + partial(i, t);
  }

 private:
  double partial(std::size_t i, double t) const {
    const double t0 = r1_.thetas()[i];
    return piece_rate_integral(a_, r1_.radii()[i], r1_.slope(t0), t - t0);
  }

  const PolarCurve& r1_;
  double a_;
  std::vector<double> cumulative_;
};

// Driven curve with a knot at every tabulated driven angle, so
// r2(theta2_i) = a - r1_i holds exactly at the table points.
PolarCurve conjugate_curve(std::span<const double> theta1,
                           std::span<const double> r1_values,
                           std::span<const double> theta2, double turn,
                           double a) {
  // theta1/theta2 tabulate one driving turn without the closing sample.
  std::vector<double> th2, rad2;
  const std::size_t n = theta1.size();
  for (long k = 0;; ++k) {
    bool done = false;
    for (std::size_t i = 0; i < n; ++i) {
      const double t2 = theta2[i] + k * turn;
      if (t2 >= kTwoPi * (1.0 - 1e-13)) {
        done = true;
        break;
      }
      th2.push_back(t2);
      rad2.push_back(a - r1_values[i]);
    }
    if (done) break;
  }
  return PolarCurve(std::move(th2), std::move(rad2));
}

}  // namespace

double driven_angle(const PolarCurve& r1, double center_distance,
                    double theta1) {
  return DrivenIntegral(r1, center_distance)(theta1);
}

PitchPair driven_motion(const PolarCurve& r1, double center_distance,
                        std::size_t grid) {
  if (grid < 3) throw InvalidInput("driven_motion: grid too small");
  const DrivenIntegral integral(r1, center_distance);
  std::vector<double> t1(grid + 1), t2(grid + 1), rad(grid);
  for (std::size_t i = 0; i <= grid; ++i) {
    t1[i] = (i == grid) ? kTwoPi : kTwoPi * static_cast<double>(i) / grid;
    t2[i] = (i == grid) ? integral.turn() : integral(t1[i]);
    if (i < grid) rad[i] = r1(t1[i]);
  }
  std::span<const double> open1(t1.data(), grid), open2(t2.data(), grid);
  PolarCurve r2 = conjugate_curve(open1, rad, open2, integral.turn(),
                                  center_distance);
  PolarCurve r1_grid(std::vector<double>(open1.begin(), open1.end()), rad);
  return PitchPair{std::move(r1_grid), std::move(r2), center_distance,
                   MotionLaw(std::move(t1), std::move(t2))};
}

double solve_center_distance(const PolarCurve& r1, int p, int q) {
  if (p < 1 || q < 1 || std::gcd(p, q) != 1)
    throw InvalidInput("solve_center_distance: p, q must be coprime and >= 1");
  const double rmax = r1.max_radius();
  const double target = kTwoPi * q;
  auto residual = [&](double a) { return p * DrivenIntegral(r1, a).turn() - target; };

  double hi = rmax * (1.0 + static_cast<double>(p) / q) * 1.001;
  double gap = 1e-3 * rmax;
  while (residual(rmax + gap) <= 0.0) {
    gap *= 1e-3;
    if (gap < 1e-15 * rmax)
      throw Infeasible("solve_center_distance: cannot bracket the closure");
  }
  return find_root(residual, rmax + gap, hi, 1e-13);
}

PitchPair pitch_from_motion(const MotionLaw& input, double center_distance) {
  // Coarse tables (e.g. a linear law) are resampled onto the default grid.
  const MotionLaw law = input.driving().size() > 64
                            ? input
                            : MotionLaw::sample([&](double t) { return input(t); },
                                                kDefaultPitchGrid);
  if (!(center_distance > 0.0))
    throw InvalidInput("pitch_from_motion: center distance must be > 0");
  const double turn = law.turn_advance();
  const Fraction closure = rationalize(turn / kTwoPi, 1000, 1e-9);
  if (closure.den == 0)
    throw InvalidInput("pitch_from_motion: law does not close after whole turns");

  const auto x = law.driving();
  const auto y = law.driven();
  const std::size_t n = x.size() - 1;  // last sample duplicates the first
  // Periodic extension of the table by whole driving turns.
  auto at = [&](long j) -> std::pair<double, double> {
    const long wraps = (j >= 0) ? j / static_cast<long>(n)
                                : -((-j + static_cast<long>(n) - 1) / static_cast<long>(n));
    const long i = j - wraps * static_cast<long>(n);
    return {x[static_cast<std::size_t>(i)] + wraps * kTwoPi,
            y[static_cast<std::size_t>(i)] + wraps * turn};
  };
  std::vector<double> rate(n);
  if (law.uniform() && n >= 5) {
    const double h = kTwoPi / n;
    for (std::size_t i = 0; i < n; ++i) {
      const long j = static_cast<long>(i);
      rate[i] = (-at(j + 2).second + 8 * at(j + 1).second - 8 * at(j - 1).second +
                 at(j - 2).second) / (12 * h);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const long j = static_cast<long>(i);
      const auto [x0, y0] = at(j - 1);
      const auto [x1, y1] = at(j);
      const auto [x2, y2] = at(j + 1);
      const double h0 = x1 - x0, h1 = x2 - x1;
      rate[i] = (-h1 / (h0 * (h0 + h1))) * y0 + ((h1 - h0) / (h0 * h1)) * y1 +
                (h0 / (h1 * (h0 + h1))) * y2;
    }
  }
  std::vector<double> r1_values(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(rate[i] > 0.0))
      throw InvalidInput("pitch_from_motion: law must be strictly increasing");
    r1_values[i] = center_distance * rate[i] / (1.0 + rate[i]);
  }
  std::vector<double> t1(x.begin(), x.end() - 1);
  std::span<const double> open2(y.data(), n);
  PolarCurve r2 = conjugate_curve(t1, r1_values, open2, turn, center_distance);
  return PitchPair{PolarCurve(std::move(t1), std::move(r1_values)), std::move(r2),
                   center_distance, law};
}

OpenPitchPair nautilus_pair(double base_radius, double sweep,
                            std::size_t samples) {
  if (!(base_radius > 0.0) || !(sweep > 0.0 && sweep < kTwoPi) || samples < 2)
    throw InvalidInput("nautilus_pair: need base radius > 0, 0 < sweep < 2pi");
  // Polar form of the circle involute: angle t - atan t, radius rb sqrt(1+t^2).
  const double roll_end = find_root(
      [&](double t) { return t - std::atan(t) - sweep; }, 0.0, sweep + 2.0, 1e-14);
  OpenPitchPair out;
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = roll_end * static_cast<double>(i) / (samples - 1);
    out.theta1.push_back(t - std::atan(t));
    out.r1.push_back(base_radius * std::sqrt(1.0 + t * t));
  }
  out.center_distance = out.r1.front() + out.r1.back();
  out.theta2.push_back(0.0);
  for (std::size_t i = 0; i < samples; ++i) {
    out.r2.push_back(out.center_distance - out.r1[i]);
    if (i == 0) continue;
    const double h = out.theta1[i] - out.theta1[i - 1];
    const double k = (out.r1[i] - out.r1[i - 1]) / h;
    out.theta2.push_back(out.theta2.back() +
                         piece_rate_integral(out.center_distance, out.r1[i - 1], k, h));
  }
  return out;
}

Fraction rationalize(double x, long max_den, double tol) {
  if (!(x > 0.0) || !std::isfinite(x)) return {};
  // Continued-fraction convergents.
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double rem = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(rem);
    const long ai = static_cast<long>(a);
    const long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    if (std::abs(x - static_cast<double>(p1) / q1) <= tol * std::max(1.0, x))
      return {p1, q1};
    const double frac = rem - a;
    if (frac < 1e-15) break;
    rem = 1.0 / frac;
  }
  return {};
}

}  // namespace gearforge
