#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qsynth/fixtures.hpp"
#include "qsynth/gates.hpp"
#include "qsynth/matrix.hpp"
#include "qsynth/optimize.hpp"
#include "qsynth/search.hpp"
#include "qsynth/structure.hpp"
#include "qsynth/topology.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace qsynth;

namespace {

SearchConfig fast_config() {
  SearchConfig cfg;
  cfg.parallelism = 1;
  cfg.rng_seed = 7;
  return cfg;
}

// A target generated by the search's own structure class at known parameters,
// so representability at the generating depth is guaranteed by construction.
Unitary planted_target(int num_qubits, int depth, std::uint64_t seed,
                       const GateSet& gs) {
  CircuitStructure n = root(num_qubits);
  const auto places = placements(Topology::line(num_qubits));
  std::mt19937_64 rng(seed);
  for (int d = 0; d < depth; ++d) {
    n = expand(n, places[rng() % places.size()], gs);
  }
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  std::vector<double> truth(static_cast<std::size_t>(n.param_count));
  for (double& v : truth) v = dist(rng);
  return evaluate(n, truth);
}

}  // namespace

TEST_CASE("identity is solved at the root with zero CNOTs") {
  const SearchResult r = synthesize(CMatrix::identity(4), Topology::line(2),
                                    GateSet::cnot(), fast_config());
  REQUIRE(r.solution.has_value());
  CHECK(cnot_count(r.solution->structure) == 0);
  CHECK(r.solution->distance < 1e-10);
  CHECK(r.nodes_expanded == 0);
  REQUIRE(r.trace.size() == 1);
  CHECK(r.trace[0].placement == "root");
  CHECK(r.trace[0].cnot == 0);
  REQUIRE(r.solution_path.size() == 1);
  CHECK(r.solution_path[0].cnot == 0);
  CHECK(r.solution_path[0].distance == r.solution->distance);
}

TEST_CASE("heuristic is the scaled distance") {
  CHECK(heuristic(0.0, 9.3623) == 0.0);
  CHECK(heuristic(0.5, 9.3623) == doctest::Approx(4.68115));
  CHECK(heuristic(1.0, 0.0) == 0.0);
  CHECK_THROWS_AS(heuristic(-0.1, 9.3623), std::invalid_argument);
}

TEST_CASE("expansion fans out once per placement in canonical order") {
  // CNOT itself needs exactly one expansion; with both orientations on a
  // 2-qubit line the first batch holds two tasks, and the batch's trace rows
  // stay in creation order even though acceptance ends the search.
  SearchConfig cfg = fast_config();
  cfg.both_orientations = true;
  cfg.delta = 1;
  const SearchResult r = synthesize(cnot_matrix(), Topology::line(2),
                                    GateSet::cnot(), cfg);
  REQUIRE(r.solution.has_value());
  CHECK(cnot_count(r.solution->structure) == 1);
  CHECK(r.nodes_expanded == 1);
  REQUIRE(r.trace.size() == 3);
  CHECK(r.trace[0].placement == "root");
  CHECK(r.trace[1].placement == "0>1");
  CHECK(r.trace[2].placement == "1>0");
  CHECK(r.trace[1].cnot == 1);
  CHECK(r.trace[2].cnot == 1);
}

TEST_CASE("accepted solutions satisfy their invariants") {
  const Unitary target = qft(2);
  const SearchConfig cfg = fast_config();
  const SearchResult r =
      synthesize(target, Topology::line(2), GateSet::cnot(), cfg);
  REQUIRE(r.solution.has_value());
  const SearchNode& sol = *r.solution;

  CHECK(sol.distance < cfg.epsilon);
  CHECK(static_cast<int>(sol.params.size()) == sol.structure.param_count);
  const int cnots = cnot_count(sol.structure);
  CHECK(cnots == 3);
  CHECK(cnots <= default_delta(2));
  CHECK(sol.priority ==
        doctest::Approx(cfg.heuristic_slope * sol.distance + cnots));

  // The stored distance is reproduced by the reference evaluator, not just
  // the fused plan the optimizer ran on.
  const double replay = hs_distance(evaluate(sol.structure, sol.params), target);
  CHECK(replay == doctest::Approx(sol.distance).epsilon(1e-9));
  CHECK(replay < cfg.epsilon);

  // Path runs root to solution with unit CNOT increments, and only the last
  // node clears the acceptance threshold.
  REQUIRE(r.solution_path.size() == static_cast<std::size_t>(cnots) + 1);
  for (std::size_t i = 0; i < r.solution_path.size(); ++i) {
    CHECK(r.solution_path[i].cnot == static_cast<int>(i));
    if (i + 1 < r.solution_path.size()) {
      CHECK(r.solution_path[i].distance >= cfg.epsilon);
    }
  }
  CHECK(r.solution_path.back().distance == sol.distance);

  CHECK(r.nodes_expanded >= 1);
  CHECK(r.optimizer_calls >= r.nodes_expanded);
  CHECK(r.objective_evals > 0);
  CHECK(r.wall_time > 0.0);
  CHECK(r.trace.size() >= r.solution_path.size());
}

TEST_CASE("planted two-CNOT targets are recovered at planted depth") {
  // Recovery at the planted depth needs the optimizer to land in the global
  // basin, which is typical but not guaranteed on every target; these seeds
  // are ones where it does, pinned by the determinism contract.
  for (std::uint64_t seed : {11u, 12u, 14u}) {
    const Unitary target = planted_target(2, 2, seed, GateSet::cnot());
    const SearchResult r =
        synthesize(target, Topology::line(2), GateSet::cnot(), fast_config());
    REQUIRE(r.solution.has_value());
    CHECK(cnot_count(r.solution->structure) <= 2);
  }
}

TEST_CASE("uniform-cost search is CNOT-minimal against a per-depth oracle") {
  // Oracle: optimize each fixed depth directly with a generous multistart
  // budget; the minimal depth that reaches epsilon is the true tree minimum.
  const Unitary target = qft(2);
  const double epsilon = 1e-10;
  const auto places = placements(Topology::line(2));
  int oracle_min = -1;
  CircuitStructure n = root(2);
  for (int depth = 0; depth <= 3 && oracle_min < 0; ++depth) {
    if (depth > 0) n = expand(n, places[0], GateSet::cnot());
    EvalPlan plan = optimize_eval_order(n);
    ObjectiveSpec spec;
    spec.dimension = n.param_count;
    spec.budget = 20000;
    spec.target_value = epsilon * 1e-3;
    spec.evaluate = [&plan, &target](std::span<const double> x) {
      return hs_distance(plan.evaluate(x), target);
    };
    const OptimizeOutcome out = multistart_minimize(spec, 8, 1001 + depth);
    if (out.best_value < epsilon) oracle_min = depth;
  }
  REQUIRE(oracle_min == 3);

  SearchConfig cfg = fast_config();
  const SearchResult r =
      synthesize_bfs(target, Topology::line(2), GateSet::cnot(), cfg);
  REQUIRE(r.solution.has_value());
  CHECK(cnot_count(r.solution->structure) == oracle_min);
  // BFS priorities are plain CNOT counts.
  for (const TraceRecord& t : r.trace) {
    CHECK(t.priority == static_cast<double>(t.cnot));
  }
}

TEST_CASE("astar and bfs agree on qft2 while astar expands no more nodes") {
  const Unitary target = qft(2);
  SearchConfig cfg = fast_config();
  cfg.both_orientations = true;
  const SearchResult astar =
      synthesize(target, Topology::line(2), GateSet::cnot(), cfg);
  const SearchResult bfs =
      synthesize_bfs(target, Topology::line(2), GateSet::cnot(), cfg);
  REQUIRE(astar.solution.has_value());
  REQUIRE(bfs.solution.has_value());
  CHECK(cnot_count(astar.solution->structure) ==
        cnot_count(bfs.solution->structure));
  CHECK(astar.nodes_expanded <= bfs.nodes_expanded);
}

TEST_CASE("beam width widens batches without losing the solution") {
  const Unitary target = qft(2);
  SearchConfig cfg = fast_config();
  cfg.both_orientations = true;
  cfg.beam_width = 2;
  const SearchResult r =
      synthesize(target, Topology::line(2), GateSet::cnot(), cfg);
  REQUIRE(r.solution.has_value());
  CHECK(cnot_count(r.solution->structure) == 3);
  CHECK(r.solution->distance < cfg.epsilon);
}

TEST_CASE("results are bit-identical across worker counts") {
  const Unitary target = qft(2);
  SearchConfig cfg = fast_config();
  cfg.both_orientations = true;
  cfg.parallelism = 1;
  const SearchResult a =
      synthesize(target, Topology::line(2), GateSet::cnot(), cfg);
  cfg.parallelism = 4;
  const SearchResult b =
      synthesize(target, Topology::line(2), GateSet::cnot(), cfg);
  REQUIRE(a.solution.has_value());
  REQUIRE(b.solution.has_value());
  CHECK(a.solution->distance == b.solution->distance);
  CHECK(a.solution->params == b.solution->params);
  CHECK(a.solution->structure.param_count == b.solution->structure.param_count);
  CHECK(a.nodes_expanded == b.nodes_expanded);
  CHECK(a.optimizer_calls == b.optimizer_calls);
  CHECK(a.objective_evals == b.objective_evals);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].distance == b.trace[i].distance);
    CHECK(a.trace[i].placement == b.trace[i].placement);
    CHECK(a.trace[i].evals == b.trace[i].evals);
  }
}

TEST_CASE("delta zero forbids any expansion") {
  SearchConfig cfg = fast_config();
  cfg.delta = 0;
  // Identity still falls out of the root layer.
  const SearchResult id = synthesize(CMatrix::identity(4), Topology::line(2),
                                     GateSet::cnot(), cfg);
  CHECK(id.solution.has_value());
  // CNOT is out of reach for bare single-qubit layers.
  const SearchResult r =
      synthesize(cnot_matrix(), Topology::line(2), GateSet::cnot(), cfg);
  CHECK_FALSE(r.solution.has_value());
  CHECK(r.nodes_expanded == 0);
  CHECK(r.trace.size() == 1);
  CHECK_THROWS_AS(path_fit_points(r), std::invalid_argument);
}

TEST_CASE("bad inputs are rejected up front") {
  const SearchConfig good = fast_config();
  const Topology line2 = Topology::line(2);
  CHECK_THROWS_AS(
      synthesize(CMatrix::identity(8), line2, GateSet::cnot(), good),
      std::invalid_argument);
  SearchConfig cfg = good;
  cfg.epsilon = 0.0;
  CHECK_THROWS_AS(synthesize(qft(2), line2, GateSet::cnot(), cfg),
                  std::invalid_argument);
  cfg = good;
  cfg.beam_width = 0;
  CHECK_THROWS_AS(synthesize(qft(2), line2, GateSet::cnot(), cfg),
                  std::invalid_argument);
  cfg = good;
  cfg.restarts = 0;
  CHECK_THROWS_AS(synthesize(qft(2), line2, GateSet::cnot(), cfg),
                  std::invalid_argument);
  cfg = good;
  cfg.heuristic_slope = -1.0;
  CHECK_THROWS_AS(synthesize(qft(2), line2, GateSet::cnot(), cfg),
                  std::invalid_argument);
  CHECK_THROWS_AS(default_delta(5), std::invalid_argument);
  CHECK(default_delta(1) == 0);
  CHECK(default_delta(2) == 3);
  CHECK(default_delta(3) == 20);
  CHECK(default_delta(4) == 100);
}

TEST_CASE("fit recovers an exact proportional law") {
  const FitResult fit = fit_heuristic({{1.0, 9.3623}, {2.0, 18.7246}});
  CHECK(fit.slope == doctest::Approx(9.3623).epsilon(1e-12));
  CHECK(fit.intercept == 0.0);
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.points == 2);
  CHECK_FALSE(fit.affine);
}

TEST_CASE("fit rejects degenerate inputs") {
  CHECK_THROWS_AS(fit_heuristic({}), std::invalid_argument);
  CHECK_THROWS_AS(fit_heuristic({{1.0, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(fit_heuristic({{0.5, 1.0}, {0.5, 2.0}, {0.5, 3.0}}),
                  std::invalid_argument);
}

TEST_CASE("affine fit recovers slope and intercept exactly") {
  const FitResult fit =
      fit_heuristic({{0.0, 1.0}, {1.0, 3.0}, {2.0, 5.0}}, true);
  CHECK(fit.affine);
  CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("solved-path fit points count down to zero remaining CNOTs") {
  const SearchResult r = synthesize_bfs(qft(2), Topology::line(2),
                                        GateSet::cnot(), fast_config());
  REQUIRE(r.solution.has_value());
  const std::vector<FitPoint> points = path_fit_points(r);
  REQUIRE(points.size() == r.solution_path.size());
  const int total = cnot_count(r.solution->structure);
  CHECK(points.front().remaining_cnots == static_cast<double>(total));
  CHECK(points.back().remaining_cnots == 0.0);
  // Distances shrink toward the solution, so the fitted slope is positive.
  const FitResult fit = fit_heuristic(points);
  CHECK(fit.slope > 0.0);
}

TEST_CASE("trace csv carries one labeled row per optimized node") {
  const SearchResult r = synthesize_bfs(qft(2), Topology::line(2),
                                        GateSet::cnot(), fast_config());
  std::stringstream s;
  write_trace_csv(s, r.trace);
  std::string line;
  REQUIRE(std::getline(s, line));
  CHECK(line == "cnot,distance,priority,placement,evals,seconds");
  std::size_t rows = 0;
  bool saw_root = false;
  while (std::getline(s, line)) {
    ++rows;
    if (line.find("root") != std::string::npos) saw_root = true;
  }
  CHECK(rows == r.trace.size());
  CHECK(saw_root);
}
