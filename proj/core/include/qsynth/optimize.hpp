#pragma once

// Derivative-free minimization of the circuit distance objective. Two
// interchangeable methods: a linear-approximation trust-region method of the
// COBYLA family (default), and a CMA-ES style evolution strategy. Gradient
// methods are deliberately absent; on this objective they stall in local
// minima.
//
// Every run is single-threaded and fully determined by (spec, seed, rng_seed)
// within one build. Concurrency happens across independent minimize calls.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace qsynth {

struct ObjectiveSpec {
  int dimension = 0;
  std::function<double(std::span<const double>)> evaluate;
  long budget = 10000;        // max objective evaluations per minimize call
  // Stop as soon as a value strictly below this is seen. The default of 0
  // never triggers on a nonnegative objective.
  double target_value = 0.0;
};

enum class OptimizerKind { Cobyla, CmaEs };

struct OptimizerOptions {
  OptimizerKind kind = OptimizerKind::Cobyla;
  // Trust region radius ladder (COBYLA family). The objective is quadratic
  // around its optima, so a final radius of 1e-9 supports distances well
  // below 1e-14.
  double rhobeg = 1.0;
  double rhoend = 1e-9;
  // Initial step scale for CMA-ES.
  double sigma0 = 0.8;
};

struct OptimizeOutcome {
  double best_value = 0.0;
  std::vector<double> best_point;
  long evaluations_used = 0;
  // True when the run ended on its own terms (target reached or the radius
  // ladder / step size ran out), false when the budget cut it off or the
  // trial aborted on a non-finite objective value.
  bool converged = false;
  // Trials abandoned because the objective returned NaN.
  int nan_aborts = 0;
  // Individual minimize runs behind this outcome (1 for minimize itself,
  // the number of trials actually launched for multistart_minimize).
  int restarts_used = 1;
};

// Unseeded starts are drawn uniformly from [-pi, pi]^dim; angles are
// periodic, so no bound constraints are imposed anywhere.
// With a seed, best_value never exceeds the objective value at the seed.
OptimizeOutcome minimize(const ObjectiveSpec& spec,
                         const std::vector<double>* seed,
                         std::uint64_t rng_seed,
                         const OptimizerOptions& options = {});

// Best over `restarts` independent minimize runs with derived rng streams.
// Restart 0 uses the provided seed (when given); later restarts are fresh.
// Exits early once a restart lands strictly below spec.target_value.
OptimizeOutcome multistart_minimize(const ObjectiveSpec& spec, int restarts,
                                    std::uint64_t rng_seed,
                                    const OptimizerOptions& options = {},
                                    const std::vector<double>* seed = nullptr);

// Deterministic stream splitter (splitmix64 finalizer over a combined word);
// used everywhere a per-task rng stream is derived from a master seed.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

// Internal entry points for the two methods; exposed for direct testing.
OptimizeOutcome minimize_cobyla(const ObjectiveSpec& spec,
                                const std::vector<double>* seed,
                                std::uint64_t rng_seed,
                                const OptimizerOptions& options);
OptimizeOutcome minimize_cmaes(const ObjectiveSpec& spec,
                               const std::vector<double>* seed,
                               std::uint64_t rng_seed,
                               const OptimizerOptions& options);

}  // namespace qsynth
