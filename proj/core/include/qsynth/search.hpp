#pragma once

// Best-first synthesis over circuit structures. The frontier is a priority
// queue ordered by f = slope * distance + cnot_count; popping beam_width
// nodes at a time turns it into beam search, and BFS mode (priority =
// cnot_count alone, i.e. uniform cost) is the slow exact baseline used to
// fit the heuristic slope.
//
// Determinism contract: for a fixed build, target, topology, gate set and
// config (including rng_seed), the returned solution is bit-identical
// regardless of worker count. Successor optimizations run concurrently but
// every rng stream is derived from the successor's creation-order id, and
// acceptance is checked in creation order after the batch joins.

#include "qsynth/gates.hpp"
#include "qsynth/matrix.hpp"
#include "qsynth/optimize.hpp"
#include "qsynth/structure.hpp"
#include "qsynth/topology.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qsynth {

enum class SearchMode { AStar, BFS };

// CNOT budget that is always sufficient for the given register width:
// 3, 20, 100 for 2, 3, 4 qubits (0 for a single qubit).
int default_delta(int num_qubits);

struct SearchConfig {
  // Acceptance threshold on hs_distance.
  double epsilon = 1e-10;
  // CNOT count limit; negative selects default_delta(num_qubits).
  int delta = -1;
  double heuristic_slope = 9.3623;
  int beam_width = 1;
  SearchMode mode = SearchMode::AStar;
  // Worker threads for successor optimization; 0 means all hardware threads.
  int parallelism = 0;
  std::uint64_t rng_seed = 0;
  // Optimizer restarts per node; restart 0 is warm-started from the parent
  // optimum (new slots near zero) when warm_start is set. Restarts stop at
  // the first one that reaches the optimizer target, so the full count is
  // spent only on nodes that cannot (or narrowly fail to) represent the
  // target; 8 keeps the per-node miss rate on representable targets well
  // under a percent where 3 loses roughly one task in six.
  int restarts = 8;
  bool warm_start = true;
  // Also search reversed (control, target) placements.
  bool both_orientations = false;
  OptimizerOptions optimizer = {};
  // Objective evaluation budget per restart; 0 means 10000 * max(1, dim/30).
  long optimizer_budget = 0;
};

struct SearchNode {
  CircuitStructure structure;
  double distance = 0.0;
  std::vector<double> params;
  // slope * distance + cnot_count in AStar mode; cnot_count in BFS mode.
  double priority = 0.0;
};

// One row per optimized node, in deterministic creation order.
struct TraceRecord {
  int cnot = 0;
  double distance = 0.0;
  double priority = 0.0;
  std::string placement;  // "root" or "c>t"
  long evals = 0;
  double seconds = 0.0;  // cumulative wall time when the record was taken
};

// (cnot_count, distance) for each node along the root-to-solution chain,
// root first. Feeds fit_heuristic: the regression x is the distance, the y
// is the solution's cnot_count minus the node's.
struct PathPoint {
  int cnot = 0;
  double distance = 0.0;
};

struct SearchResult {
  std::optional<SearchNode> solution;
  std::vector<PathPoint> solution_path;
  long nodes_expanded = 0;
  // minimize invocations (each restart counts one) and their total
  // objective evaluations.
  long optimizer_calls = 0;
  long objective_evals = 0;
  int nan_aborts = 0;
  double wall_time = 0.0;
  std::vector<TraceRecord> trace;
};

// Throws std::invalid_argument on dimension mismatch or bad config. A node
// whose optimization aborts (non-finite distance) stays in the frontier with
// infinite stored distance so its subtree remains reachable, but it can never
// be accepted as a solution.
SearchResult synthesize(const Unitary& target, const Topology& topo,
                        const GateSet& gate_set, const SearchConfig& cfg);

// Uniform-cost baseline: identical loop with priority = cnot_count.
SearchResult synthesize_bfs(const Unitary& target, const Topology& topo,
                            const GateSet& gate_set, const SearchConfig& cfg);

// slope * distance. Throws std::invalid_argument for negative distance.
double heuristic(double distance, double slope);

struct FitPoint {
  double distance = 0.0;
  double remaining_cnots = 0.0;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;  // always 0 for the through-origin fit
  double r2 = 0.0;
  std::size_t points = 0;
  bool affine = false;
};

// Least-squares fit of remaining-CNOTs against distance over solved-path
// records; through the origin by default, affine behind the flag. r2 is
// uncentered for the origin fit and centered for the affine one. Throws
// std::invalid_argument on fewer than 2 points or an all-equal x column.
FitResult fit_heuristic(const std::vector<FitPoint>& points,
                        bool affine = false);

// Fit points of a solved result's path (throws if there is no solution).
std::vector<FitPoint> path_fit_points(const SearchResult& result);

// CSV with header "cnot,distance,priority,placement,evals,seconds".
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace);

}  // namespace qsynth
