#include "gearforge/numerics.hpp"

#include <cmath>
#include <sstream>

#include "gearforge/errors.hpp"

namespace gearforge {
namespace {

constexpr int kMaxDepth = 48;

struct SimpsonState {
  const ScalarFunction& f;
  bool converged = true;
};

double simpson(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(SimpsonState& st, double a, double b, double fa, double fm,
             double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = st.f(lm), frm = st.f(rm);
  const double left = simpson(fa, flm, fm, a, m);
  const double right = simpson(fm, frm, fb, m, b);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth >= kMaxDepth) {
    st.converged = false;
    return left + right + delta / 15.0;
  }
  return adapt(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         adapt(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate(const ScalarFunction& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  if (a > b) return -integrate(f, b, a, tol);
  SimpsonState st{f};
  // Start from a few panels so periodic integrands cannot fool the first
  // error estimate.
  constexpr int kPanels = 8;
  const double h = (b - a) / kPanels;
  double total = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    const double x0 = a + i * h;
    const double x1 = (i == kPanels - 1) ? b : x0 + h;
    const double xm = 0.5 * (x0 + x1);
    const double f0 = f(x0), fm = f(xm), f1 = f(x1);
    if (!std::isfinite(f0) || !std::isfinite(fm) || !std::isfinite(f1))
      throw InvalidInput("integrate: integrand not finite");
    total += adapt(st, x0, x1, f0, fm, f1, simpson(f0, fm, f1, x0, x1),
                   tol / kPanels, 0);
  }
  if (!st.converged || !std::isfinite(total)) {
    std::ostringstream msg;
    msg << "integrate: no convergence on [" << a << ", " << b << "]";
    throw ConvergenceError(msg.str(), total);
  }
  return total;
}

double find_root(const ScalarFunction& f, double lo, double hi, double tol) {
  if (lo > hi) std::swap(lo, hi);
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    std::ostringstream msg;
    msg << "find_root: no sign change on [" << lo << ", " << hi << "]";
    throw BracketError(msg.str());
  }
  bool try_secant = true;
  for (int iter = 0; iter < 400; ++iter) {
    const double width = hi - lo;
    double x = 0.5 * (lo + hi);
    if (try_secant) {
      const double s = hi - fhi * (hi - lo) / (fhi - flo);
      // Only accept secant points comfortably inside the bracket.
      if (std::isfinite(s) && s > lo + 0.01 * width && s < hi - 0.01 * width)
        x = s;
    }
    const double fx = f(x);
    if (std::abs(fx) <= tol) return x;
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    // Fall back to bisection whenever the last step did not halve the bracket.
    try_secant = (hi - lo) <= 0.5 * width;
    if (hi - lo <= tol) return 0.5 * (lo + hi);
  }
  return 0.5 * (lo + hi);
}

}  // namespace gearforge
