#pragma once

#include <functional>

namespace entac {

/// Adaptive Simpson integration of f over [a, b].
///
/// Recursion splits an interval until the Richardson error estimate drops
/// below the interval's share of the absolute tolerance. Exceeding max_depth
/// or sampling a non-finite value raises NumericError.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10, int max_depth = 50);

}  // namespace entac
