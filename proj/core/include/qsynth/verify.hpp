#pragma once

// Independent distinguishability checks for synthesized circuits: Kullback-
// Leibler divergence between measurement distributions on random input
// states, plus the distance-threshold validation protocol (perturb a random
// unitary, watch distance and worst-case KL move together).

#include "qsynth/matrix.hpp"
#include "qsynth/structure.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

namespace qsynth {

using StateVector = std::vector<cplx>;

// Normalized state with independent complex normal amplitudes (Haar on the
// sphere).
StateVector random_state(std::size_t dim, std::mt19937_64& rng);

// Computational-basis measurement distribution |u psi|^2.
std::vector<double> measurement_distribution(const CMatrix& u,
                                             const StateVector& psi);

// KL(p || q) with additive smoothing 1e-30 on every cell before the log
// ratio, clamped at 0. Random states make exact zeros measure-zero but
// rounding can produce them.
double kl_divergence(const std::vector<double>& p,
                     const std::vector<double>& q);

// Haar-distributed: QR of a complex Ginibre sample by modified Gram-Schmidt
// with a reorthogonalization pass; the R diagonal is real-positive by
// construction, which is exactly the phase convention Haar requires.
Unitary haar_random_unitary(int dim, std::uint64_t rng_seed);

// Worst-case KL divergence between the two unitaries' measurement
// distributions over `trials` random states. Streams split per trial index,
// so the result is independent of evaluation order.
double verify_unitaries(const Unitary& u, const Unitary& target, int trials,
                        std::uint64_t rng_seed);

// Same check for a parameterized structure at the given parameters.
double verify_circuit(const CircuitStructure& structure, ParamView params,
                      const Unitary& target, int trials,
                      std::uint64_t rng_seed);

struct KLPoint {
  double distance = 0.0;
  double worst_kl = 0.0;
};

struct KLReport {
  long samples = 0;  // total random states drawn across all pairs
  double max_kl = 0.0;
  double max_distance = 0.0;
  std::vector<KLPoint> pairs;
};

// Distance-to-KL correlation protocol at a fixed 3-qubit scale (dim 8, the
// register size the validation targets): for each perturbation scale and
// each pair, draw Haar-random U and a near-identity V with angles
// ~ Normal(0, scale), then record hs_distance(U V, U) against the worst KL
// over states_per_pair random states. Deterministic under rng_seed.
KLReport threshold_study(int num_pairs,
                         const std::vector<double>& perturbation_scales,
                         int states_per_pair, std::uint64_t rng_seed);

// Spearman rank correlation (average ranks on ties), in [-1, 1].
double spearman_correlation(const std::vector<double>& x,
                            const std::vector<double>& y);

// Delimited text: "distance,worst_kl" header plus one row per pair.
void write_kl_report(std::ostream& out, const KLReport& report);

}  // namespace qsynth
