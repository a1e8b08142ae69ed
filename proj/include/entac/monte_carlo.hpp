#pragma once

#include <cstdint>
#include <vector>

#include "entac/density.hpp"

namespace entac {

struct TrialConfig {
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
};

/// Bernoulli frequency estimate with its standard error.
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

/// Deterministic counter-based generator. Distinct (seed, stream) pairs give
/// decorrelated, non-overlapping sequences, so parallel workers can each own
/// a stream without coordination.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next();

  /// Uniform draw in [0, 1) with 53-bit resolution.
  double uniform01();

 private:
  std::uint64_t state_;
};

/// One draw from the density via inverse-CDF sampling.
double sample_distance(const DensityModel& density, CounterRng& rng);

/// Empirical probability that all g i.i.d. distances fall below the bound.
Estimate estimate_single_path(int g, const DensityModel& density, double bound,
                              const TrialConfig& config);

/// Empirical probability that at least one path (path_gs[i] i.i.d. distances
/// each) has all its distances below the bound.
Estimate estimate_multipath(const std::vector<int>& path_gs, const DensityModel& density,
                            double bound, const TrialConfig& config);

}  // namespace entac
