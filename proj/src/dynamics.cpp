#include "entac/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "entac/errors.hpp"

namespace entac {

DriftFunction DriftFunction::constant(double value) {
  DriftFunction f;
  f.kind = Kind::Constant;
  f.value = value;
  return f;
}

DriftFunction DriftFunction::linear(double offset, double slope) {
  DriftFunction f;
  f.kind = Kind::Linear;
  f.offset = offset;
  f.slope = slope;
  return f;
}

DriftFunction DriftFunction::exp_decay(double amplitude, double rate) {
  DriftFunction f;
  f.kind = Kind::ExpDecay;
  f.amplitude = amplitude;
  f.rate = rate;
  return f;
}

DriftFunction DriftFunction::sinusoidal(double amplitude, double omega, double phase) {
  DriftFunction f;
  f.kind = Kind::Sinusoidal;
  f.amplitude = amplitude;
  f.omega = omega;
  f.phase = phase;
  return f;
}

DriftFunction DriftFunction::piecewise(std::vector<double> times, std::vector<double> values) {
  if (values.size() != times.size() + 1) {
    throw DomainError("piecewise drift needs values.size() == times.size() + 1");
  }
  if (!std::is_sorted(times.begin(), times.end()) ||
      std::adjacent_find(times.begin(), times.end()) != times.end()) {
    throw DomainError("piecewise drift breakpoints must be strictly increasing");
  }
  DriftFunction f;
  f.kind = Kind::Piecewise;
  f.times = std::move(times);
  f.values = std::move(values);
  return f;
}

double DriftFunction::operator()(double t) const {
  switch (kind) {
    case Kind::Constant:
      return value;
    case Kind::Linear:
      return offset + slope * t;
    case Kind::ExpDecay:
      return amplitude * std::exp(-rate * t);
    case Kind::Sinusoidal:
      return amplitude * std::sin(omega * t + phase);
    case Kind::Piecewise: {
      // values[k] holds on [times[k-1], times[k]), with open ends outside.
      const auto it = std::upper_bound(times.begin(), times.end(), t);
      return values[static_cast<std::size_t>(it - times.begin())];
    }
  }
  return 0.0;
}

double DriftFunction::integral(const TimeWindow& window) const {
  if (window.dt < 0.0) {
    throw DomainError("time window must have dt >= 0");
  }
  const double a = window.t0;
  const double b = window.t0 + window.dt;
  double result = 0.0;
  switch (kind) {
    case Kind::Constant:
      result = value * window.dt;
      break;
    case Kind::Linear:
      result = offset * window.dt + 0.5 * slope * (b * b - a * a);
      break;
    case Kind::ExpDecay:
      if (rate == 0.0) {
        result = amplitude * window.dt;
      } else {
        result = amplitude / rate * (std::exp(-rate * a) - std::exp(-rate * b));
      }
      break;
    case Kind::Sinusoidal:
      if (omega == 0.0) {
        result = amplitude * std::sin(phase) * window.dt;
      } else {
        result = amplitude / omega * (std::cos(omega * a + phase) - std::cos(omega * b + phase));
      }
      break;
    case Kind::Piecewise: {
      // Exact sum over the segments intersecting [a, b].
      double lo = a;
      for (std::size_t k = 0; k <= times.size() && lo < b; ++k) {
        const double seg_end = (k < times.size()) ? times[k] : b;
        const double hi = std::min(seg_end, b);
        if (hi > lo) {
          result += values[k] * (hi - lo);
          lo = hi;
        }
      }
      break;
    }
  }
  if (!std::isfinite(result)) {
    throw NumericError("drift integral is not finite");
  }
  return result;
}

ChiVector chi(const EvolutionProfile& profile, const TimeWindow& window) {
  return ChiVector{profile.phi_prob.integral(window), profile.phi_fid.integral(window)};
}

namespace {

double clamp01(double v, bool& clamped) {
  if (v < 0.0) {
    clamped = true;
    return 0.0;
  }
  if (v > 1.0) {
    clamped = true;
    return 1.0;
  }
  return v;
}

void require_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw DomainError(std::string(name) + " must lie in [0, 1]");
  }
}

}  // namespace

std::pair<NodeState, ClampReport> evolve_state(const NodeState& state,
                                               const EvolutionProfile& profile,
                                               const TimeWindow& window) {
  const ChiVector c = chi(profile, window);
  ClampReport report;
  NodeState next;
  next.connection_probability =
      clamp01(state.connection_probability + c.d_prob, report.probability_clamped);
  next.fidelity = clamp01(state.fidelity + c.d_fid, report.fidelity_clamped);
  return {next, report};
}

double fidelity_distance(double fx, double fy) {
  require_unit(fx, "fidelity");
  require_unit(fy, "fidelity");
  return std::fabs(fx - fy);
}

double prob_distance(double px, double py) {
  require_unit(px, "connection probability");
  require_unit(py, "connection probability");
  return std::fabs(px - py);
}

double gamma(const NodeState& sx, const NodeState& sy) {
  return std::hypot(sx.connection_probability - sy.connection_probability,
                    sx.fidelity - sy.fidelity);
}

}  // namespace entac
