#include "entac/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

#include "entac/errors.hpp"

namespace entac {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double bernoulli_std_error(double mean, std::uint64_t trials) {
  return std::sqrt(mean * (1.0 - mean) / static_cast<double>(trials));
}

// Runs `trials` Bernoulli experiments split over hardware threads. Each trial
// owns the stream equal to its global index, so the partitioning does not
// affect the draws and the reduction is a plain order-independent sum.
Estimate run_trials(const TrialConfig& config,
                    const std::function<bool(CounterRng&)>& trial) {
  if (config.trials < 1) throw DomainError("trial count must be at least 1");

  const std::uint64_t trials = config.trials;
  unsigned worker_count = std::thread::hardware_concurrency();
  if (worker_count == 0) worker_count = 1;
  worker_count = static_cast<unsigned>(
      std::min<std::uint64_t>(worker_count, trials));

  std::atomic<std::uint64_t> successes{0};
  auto work = [&](std::uint64_t begin, std::uint64_t end) {
    std::uint64_t local = 0;
    for (std::uint64_t t = begin; t < end; ++t) {
      CounterRng rng(config.seed, t);
      if (trial(rng)) ++local;
    }
    successes.fetch_add(local, std::memory_order_relaxed);
  };

  std::vector<std::thread> workers;
  workers.reserve(worker_count);
  const std::uint64_t chunk = trials / worker_count;
  const std::uint64_t extra = trials % worker_count;
  std::uint64_t begin = 0;
  for (unsigned w = 0; w < worker_count; ++w) {
    const std::uint64_t end = begin + chunk + (w < extra ? 1 : 0);
    workers.emplace_back(work, begin, end);
    begin = end;
  }
  for (auto& worker : workers) worker.join();

  Estimate estimate;
  estimate.trials = trials;
  estimate.mean = static_cast<double>(successes.load()) / static_cast<double>(trials);
  estimate.std_error = bernoulli_std_error(estimate.mean, trials);
  return estimate;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : state_(mix64(seed + kGolden) ^ mix64(stream * kGolden + 1)) {}

std::uint64_t CounterRng::next() {
  state_ += kGolden;
  return mix64(state_);
}

double CounterRng::uniform01() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double sample_distance(const DensityModel& density, CounterRng& rng) {
  return quantile(density, rng.uniform01());
}

Estimate estimate_single_path(int g, const DensityModel& density, double bound,
                              const TrialConfig& config) {
  if (g < 0) throw DomainError("edge count must be nonnegative");
  return run_trials(config, [&](CounterRng& rng) {
    for (int e = 0; e < g; ++e) {
      if (!(sample_distance(density, rng) < bound)) return false;
    }
    return true;
  });
}

Estimate estimate_multipath(const std::vector<int>& path_gs, const DensityModel& density,
                            double bound, const TrialConfig& config) {
  for (int g : path_gs) {
    if (g < 0) throw DomainError("edge count must be nonnegative");
  }
  return run_trials(config, [&](CounterRng& rng) {
    for (int g : path_gs) {
      bool pass = true;
      for (int e = 0; e < g; ++e) {
        if (!(sample_distance(density, rng) < bound)) {
          pass = false;
          break;
        }
      }
      if (pass) return true;
    }
    return false;
  });
}

}  // namespace entac
