#include "entac/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "entac/errors.hpp"
#include "entac/quadrature.hpp"

namespace entac {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

double normal_pdf(double z, double mu, double sigma) {
  const double u = (z - mu) / sigma;
  return kInvSqrt2Pi / sigma * std::exp(-0.5 * u * u);
}

double normal_cdf(double z, double mu, double sigma) {
  return 0.5 * std::erfc(-(z - mu) / (sigma * std::sqrt(2.0)));
}

// Mass of the untruncated normal inside [lo, hi].
double truncation_mass(const DensityModel& d) {
  return normal_cdf(d.hi, d.mu, d.sigma) - normal_cdf(d.lo, d.mu, d.sigma);
}

// Exact integral of the piecewise-linear tabulated pdf over [0, bound].
double tabulated_cdf(const DensityModel& d, double bound) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < d.points.size(); ++i) {
    const auto [x0, y0] = d.points[i];
    const auto [x1, y1] = d.points[i + 1];
    if (bound <= x0) {
      break;
    }
    const double hi = std::min(bound, x1);
    if (hi <= x0) {
      continue;
    }
    const double y_hi = y0 + (y1 - y0) * (hi - x0) / (x1 - x0);
    acc += 0.5 * (y0 + y_hi) * (hi - x0);
  }
  return std::min(acc, 1.0);
}

}  // namespace

DensityModel DensityModel::exponential(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("exponential density needs lambda > 0");
  }
  DensityModel d;
  d.kind = Kind::Exponential;
  d.lambda = lambda;
  return d;
}

DensityModel DensityModel::uniform(double lo, double hi) {
  if (!(lo >= 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    throw DomainError("uniform density needs 0 <= lo < hi");
  }
  DensityModel d;
  d.kind = Kind::Uniform;
  d.lo = lo;
  d.hi = hi;
  return d;
}

DensityModel DensityModel::truncated_normal(double mu, double sigma, double lo, double hi) {
  if (!(sigma > 0.0) || !(lo >= 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    throw DomainError("truncated normal needs sigma > 0 and 0 <= lo < hi");
  }
  DensityModel d;
  d.kind = Kind::TruncatedNormal;
  d.mu = mu;
  d.sigma = sigma;
  d.lo = lo;
  d.hi = hi;
  if (!(truncation_mass(d) > 0.0)) {
    throw DomainError("truncated normal has no mass inside [lo, hi]");
  }
  return d;
}

DensityModel DensityModel::tabulated(std::vector<std::pair<double, double>> points) {
  if (points.size() < 2) {
    throw DomainError("tabulated density needs at least two points");
  }
  double mass = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].first >= 0.0) || !(points[i].second >= 0.0) ||
        !std::isfinite(points[i].first) || !std::isfinite(points[i].second)) {
      throw DomainError("tabulated density points must be finite with z >= 0 and density >= 0");
    }
    if (i > 0) {
      if (!(points[i].first > points[i - 1].first)) {
        throw DomainError("tabulated density abscissae must be strictly increasing");
      }
      mass += 0.5 * (points[i - 1].second + points[i].second) *
              (points[i].first - points[i - 1].first);
    }
  }
  if (!(mass > 0.0)) {
    throw DomainError("tabulated density has zero total mass");
  }
  // Renormalize so the trapezoid mass is exactly one.
  for (auto& [z, y] : points) {
    y /= mass;
  }
  DensityModel d;
  d.kind = Kind::Tabulated;
  d.points = std::move(points);
  return d;
}

double DensityModel::pdf(double z) const {
  switch (kind) {
    case Kind::Exponential:
      return z < 0.0 ? 0.0 : lambda * std::exp(-lambda * z);
    case Kind::Uniform:
      return (z < lo || z > hi) ? 0.0 : 1.0 / (hi - lo);
    case Kind::TruncatedNormal:
      if (z < lo || z > hi) {
        return 0.0;
      }
      return normal_pdf(z, mu, sigma) / truncation_mass(*this);
    case Kind::Tabulated: {
      if (points.empty() || z < points.front().first || z > points.back().first) {
        return 0.0;
      }
      auto it = std::upper_bound(points.begin(), points.end(), z,
                                 [](double v, const auto& p) { return v < p.first; });
      if (it == points.begin()) {
        return points.front().second;
      }
      if (it == points.end()) {
        return points.back().second;
      }
      const auto [x1, y1] = *it;
      const auto [x0, y0] = *(it - 1);
      return y0 + (y1 - y0) * (z - x0) / (x1 - x0);
    }
  }
  return 0.0;
}

double DensityModel::support_upper() const {
  switch (kind) {
    case Kind::Exponential:
      return std::numeric_limits<double>::infinity();
    case Kind::Uniform:
    case Kind::TruncatedNormal:
      return hi;
    case Kind::Tabulated:
      return points.back().first;
  }
  return 0.0;
}

double cdf(const DensityModel& density, double bound) {
  if (!(bound >= 0.0)) {
    throw DomainError("cdf bound must be >= 0");
  }
  switch (density.kind) {
    case DensityModel::Kind::Exponential:
      return -std::expm1(-density.lambda * bound);
    case DensityModel::Kind::Uniform: {
      const double covered = std::min(bound, density.hi) - density.lo;
      if (covered <= 0.0) {
        return 0.0;
      }
      return std::min(covered / (density.hi - density.lo), 1.0);
    }
    case DensityModel::Kind::TruncatedNormal: {
      const double hi = std::min(bound, density.hi);
      if (hi <= density.lo) {
        return 0.0;
      }
      const double mass = integrate([&](double z) { return density.pdf(z); }, density.lo, hi);
      return std::clamp(mass, 0.0, 1.0);
    }
    case DensityModel::Kind::Tabulated:
      return tabulated_cdf(density, bound);
  }
  return 0.0;
}

namespace {

double tabulated_quantile(const DensityModel& d, double u) {
  // The CDF is piecewise quadratic; invert segment by segment.
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < d.points.size(); ++i) {
    const auto [x0, y0] = d.points[i];
    const auto [x1, y1] = d.points[i + 1];
    const double w = x1 - x0;
    const double seg = 0.5 * (y0 + y1) * w;
    if (u > acc + seg && i + 2 < d.points.size()) {
      acc += seg;
      continue;
    }
    const double target = u - acc;
    const double slope = (y1 - y0) / w;
    if (std::fabs(slope) < 1e-300) {
      return y0 > 0.0 ? std::min(x0 + target / y0, x1) : x1;
    }
    // Solve slope/2 * s^2 + y0 * s = target for the offset s within the segment.
    const double disc = std::max(y0 * y0 + 2.0 * slope * target, 0.0);
    const double s = (-y0 + std::sqrt(disc)) / slope;
    return std::clamp(x0 + s, x0, x1);
  }
  return d.points.back().first;
}

double truncated_normal_quantile(const DensityModel& d, double u) {
  // Bisection in z against the closed-form normal CDF of the truncation;
  // agreement with the quadrature route is covered by tests.
  const double mass = truncation_mass(d);
  const double target = normal_cdf(d.lo, d.mu, d.sigma) + u * mass;
  double lo = d.lo;
  double hi = d.hi;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (normal_cdf(mid, d.mu, d.sigma) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double quantile(const DensityModel& density, double u) {
  if (!(u >= 0.0 && u < 1.0)) {
    throw DomainError("quantile argument must lie in [0, 1)");
  }
  switch (density.kind) {
    case DensityModel::Kind::Exponential:
      return -std::log1p(-u) / density.lambda;
    case DensityModel::Kind::Uniform:
      return density.lo + u * (density.hi - density.lo);
    case DensityModel::Kind::TruncatedNormal:
      return truncated_normal_quantile(density, u);
    case DensityModel::Kind::Tabulated:
      return tabulated_quantile(density, u);
  }
  return 0.0;
}

}  // namespace entac
