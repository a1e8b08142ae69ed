#pragma once

#include <utility>
#include <vector>

namespace entac {

/// Probability density over nonnegative state distances.
///
/// Supported families:
///   Exponential      lambda * exp(-lambda * z) on [0, inf)
///   Uniform          1 / (hi - lo) on [lo, hi], lo >= 0
///   TruncatedNormal  normal(mu, sigma) restricted to [lo, hi], lo >= 0
///   Tabulated        piecewise-linear pdf through sample points, renormalized
///                    to unit mass on load
struct DensityModel {
  enum class Kind { Exponential, Uniform, TruncatedNormal, Tabulated };

  Kind kind = Kind::Exponential;
  double lambda = 1.0;  // Exponential
  double lo = 0.0;      // Uniform / TruncatedNormal support bounds
  double hi = 1.0;
  double mu = 0.0;     // TruncatedNormal
  double sigma = 1.0;  // TruncatedNormal
  std::vector<std::pair<double, double>> points;  // Tabulated (z, density)

  static DensityModel exponential(double lambda);
  static DensityModel uniform(double lo, double hi);
  static DensityModel truncated_normal(double mu, double sigma, double lo, double hi);
  static DensityModel tabulated(std::vector<std::pair<double, double>> points);

  double pdf(double z) const;

  /// Upper end of the support; infinity for the exponential family.
  double support_upper() const;
};

/// P(Z <= bound) = integral of the density over [0, bound].
///
/// Closed form for the exponential and uniform families; the truncated normal
/// integrates its pdf by adaptive quadrature (abs tol 1e-10) and the tabulated
/// family sums its piecewise-linear segments exactly. bound must be >= 0.
double cdf(const DensityModel& density, double bound);

/// Inverse CDF for u in [0, 1): closed form where available, otherwise
/// numeric inversion to within 1e-10 in z.
double quantile(const DensityModel& density, double u);

}  // namespace entac
