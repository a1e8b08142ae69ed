#pragma once

#include <string>
#include <vector>

namespace entac {

/// Half-open evaluation window [t0, t0 + dt], dt >= 0.
struct TimeWindow {
  double t0 = 0.0;
  double dt = 0.0;
};

/// One drift-rate function of time, expressed as a parametric family.
///
/// Families and their parameters:
///   Constant   phi(t) = value
///   Linear     phi(t) = offset + slope * t
///   ExpDecay   phi(t) = amplitude * exp(-rate * t)
///   Sinusoidal phi(t) = amplitude * sin(omega * t + phase)
///   Piecewise  piecewise constant: values[k] on the k-th segment cut by
///              strictly increasing times (values.size() == times.size() + 1)
struct DriftFunction {
  enum class Kind { Constant, Linear, ExpDecay, Sinusoidal, Piecewise };

  Kind kind = Kind::Constant;
  double value = 0.0;      // Constant
  double offset = 0.0;     // Linear
  double slope = 0.0;      // Linear
  double amplitude = 0.0;  // ExpDecay, Sinusoidal
  double rate = 0.0;       // ExpDecay
  double omega = 0.0;      // Sinusoidal
  double phase = 0.0;      // Sinusoidal
  std::vector<double> times;   // Piecewise breakpoints, strictly increasing
  std::vector<double> values;  // Piecewise segment values

  static DriftFunction constant(double value);
  static DriftFunction linear(double offset, double slope);
  static DriftFunction exp_decay(double amplitude, double rate);
  static DriftFunction sinusoidal(double amplitude, double omega, double phase = 0.0);
  static DriftFunction piecewise(std::vector<double> times, std::vector<double> values);

  /// Point evaluation phi(t).
  double operator()(double t) const;

  /// Exact integral over [t0, t0 + dt] via the family's antiderivative.
  double integral(const TimeWindow& window) const;
};

/// Drift of one endpoint's state: rates for the connection-probability and
/// fidelity components.
struct EvolutionProfile {
  DriftFunction phi_prob;
  DriftFunction phi_fid;
};

/// Accumulated state change over a window: (integral of phi_prob, integral of phi_fid).
struct ChiVector {
  double d_prob = 0.0;
  double d_fid = 0.0;
};

/// Per-endpoint state: connection probability and entanglement fidelity,
/// both in [0, 1].
struct NodeState {
  double connection_probability = 0.0;
  double fidelity = 0.0;
};

/// Which components hit the [0, 1] wall during evolution.
struct ClampReport {
  bool probability_clamped = false;
  bool fidelity_clamped = false;
};

/// Integrates both drift components of a profile over a window.
ChiVector chi(const EvolutionProfile& profile, const TimeWindow& window);

/// Advances a state by the accumulated drift, clamping each component into [0, 1].
std::pair<NodeState, ClampReport> evolve_state(const NodeState& state,
                                               const EvolutionProfile& profile,
                                               const TimeWindow& window);

/// |fx - fy| for fidelities in [0, 1].
double fidelity_distance(double fx, double fy);

/// |px - py| for probabilities in [0, 1].
double prob_distance(double px, double py);

/// Euclidean distance between two endpoint states.
double gamma(const NodeState& sx, const NodeState& sy);

}  // namespace entac
