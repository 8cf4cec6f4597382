#pragma once

#include <functional>

namespace gearforge {

using ScalarFunction = std::function<double(double)>;

// Adaptive Simpson quadrature with interval bisection. Throws
// ConvergenceError (carrying the best estimate) if some subinterval still
// misses its error budget at the maximum refinement depth.
double integrate(const ScalarFunction& f, double a, double b,
                 double tol = 1e-10);

// Bracketing root finder: bisection with secant steps when they shrink the
// bracket. Stops once |f(x)| <= tol or the bracket is narrower than tol.
// Throws BracketError when f(lo) and f(hi) share a strict sign.
double find_root(const ScalarFunction& f, double lo, double hi,
                 double tol = 1e-12);

// Fixed-order Gauss-Legendre rule on [a, b] (5 nodes).
template <typename F>
double gauss_legendre5(F&& f, double a, double b) {
  constexpr double nodes[5] = {0.0, -0.5384693101056831, 0.5384693101056831,
                               -0.9061798459386640, 0.9061798459386640};
  constexpr double weights[5] = {0.5688888888888889, 0.4786286704993665,
                                 0.4786286704993665, 0.2369268850561891,
                                 0.2369268850561891};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < 5; ++i) sum += weights[i] * f(mid + half * nodes[i]);
  return sum * half;
}

}  // namespace gearforge
