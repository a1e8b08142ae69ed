#include "entac/quadrature.hpp"

#include <cmath>

#include "entac/errors.hpp"

namespace entac {

namespace {

double sample(const std::function<double(double)>& f, double x) {
  double v = f(x);
  if (!std::isfinite(v)) {
    throw NumericError("non-finite integrand sample at x=" + std::to_string(x));
  }
  return v;
}

double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double b, double fa, double fm,
             double fb, double whole, double tol, int depth, int max_depth) {
  if (depth > max_depth) {
    throw NumericError("adaptive Simpson depth exhausted");
  }
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = sample(f, lm);
  const double frm = sample(f, rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double err = left + right - whole;
  if (std::fabs(err) <= 15.0 * tol) {
    return left + right + err / 15.0;
  }
  return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth) +
         adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 int max_depth) {
  if (a == b) {
    return 0.0;
  }
  const double fa = sample(f, a);
  const double fm = sample(f, 0.5 * (a + b));
  const double fb = sample(f, b);
  const double whole = simpson(fa, fm, fb, b - a);
  return adapt(f, a, b, fa, fm, fb, whole, abs_tol, 0, max_depth);
}

}  // namespace entac
