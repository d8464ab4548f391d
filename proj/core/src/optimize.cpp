#include "qsynth/optimize.hpp"

#include <limits>
#include <stdexcept>

namespace qsynth {

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  // splitmix64 finalizer over the pair; cheap, and adjacent streams land far
  // apart so per-restart generators do not correlate.
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

OptimizeOutcome minimize(const ObjectiveSpec& spec,
                         const std::vector<double>* seed,
                         std::uint64_t rng_seed,
                         const OptimizerOptions& options) {
  switch (options.kind) {
    case OptimizerKind::Cobyla:
      return minimize_cobyla(spec, seed, rng_seed, options);
    case OptimizerKind::CmaEs:
      return minimize_cmaes(spec, seed, rng_seed, options);
  }
  throw std::logic_error("minimize: unknown optimizer kind");
}

OptimizeOutcome multistart_minimize(const ObjectiveSpec& spec, int restarts,
                                    std::uint64_t rng_seed,
                                    const OptimizerOptions& options,
                                    const std::vector<double>* seed) {
  if (restarts < 1) {
    throw std::invalid_argument("multistart_minimize: restarts must be >= 1");
  }
  OptimizeOutcome best;
  best.best_value = std::numeric_limits<double>::infinity();
  long total_evals = 0;
  int total_nan = 0;
  int trials = 0;
  for (int r = 0; r < restarts; ++r) {
    // Restart 0 reuses the caller's start point when given; later restarts
    // draw fresh uniform angles inside the optimizer.
    const std::vector<double>* start = (r == 0) ? seed : nullptr;
    OptimizeOutcome trial =
        minimize(spec, start, mix_seed(rng_seed, static_cast<std::uint64_t>(r)),
                 options);
    total_evals += trial.evaluations_used;
    total_nan += trial.nan_aborts;
    ++trials;
    if (trial.best_value < best.best_value) {
      best.best_value = trial.best_value;
      best.best_point = trial.best_point;
      best.converged = trial.converged;
    }
    if (best.best_value < spec.target_value) break;
  }
  best.evaluations_used = total_evals;
  best.nan_aborts = total_nan;
  best.restarts_used = trials;
  return best;
}

}  // namespace qsynth
