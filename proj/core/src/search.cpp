#include "qsynth/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace qsynth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// A node that has been pushed onto the frontier (or accepted). Kept in a
// flat pool so the solution path can be walked by parent index.
struct NodeRecord {
  CircuitStructure structure;
  std::vector<double> params;
  double distance = 0.0;
  double priority = 0.0;
  int cnot = 0;
  long parent = -1;
};

struct QueueEntry {
  double priority = 0.0;
  int cnot = 0;
  long pool_index = 0;  // doubles as FIFO order: pushes happen in scan order
};

struct EntryWorse {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    if (a.priority != b.priority) return a.priority > b.priority;
    if (a.cnot != b.cnot) return a.cnot > b.cnot;
    return a.pool_index > b.pool_index;
  }
};

struct TaskOutcome {
  double distance = kInf;
  std::vector<double> params;
  long evals = 0;
  int calls = 0;
  int nans = 0;
};

std::string placement_name(std::pair<int, int> p) {
  return std::to_string(p.first) + ">" + std::to_string(p.second);
}

SearchResult run_search(const Unitary& target, const Topology& topo,
                        const GateSet& gate_set, const SearchConfig& cfg,
                        SearchMode mode) {
  const auto t_start = std::chrono::steady_clock::now();
  auto elapsed = [&t_start]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t_start)
        .count();
  };

  topo.validate();
  const int n = topo.num_qubits;
  const std::size_t dim = std::size_t{1} << n;
  if (target.rows() != dim || target.cols() != dim) {
    throw std::invalid_argument(
        "synthesize: target dimension does not match the topology's register");
  }
  if (!target.all_finite()) {
    throw std::invalid_argument("synthesize: target has non-finite entries");
  }
  if (!(cfg.epsilon > 0.0)) {
    throw std::invalid_argument("synthesize: epsilon must be > 0");
  }
  if (cfg.heuristic_slope < 0.0) {
    throw std::invalid_argument("synthesize: heuristic_slope must be >= 0");
  }
  if (cfg.beam_width < 1) {
    throw std::invalid_argument("synthesize: beam_width must be >= 1");
  }
  if (cfg.restarts < 1) {
    throw std::invalid_argument("synthesize: restarts must be >= 1");
  }
  const int delta = cfg.delta >= 0 ? cfg.delta : default_delta(n);
  int jobs = cfg.parallelism > 0
                 ? cfg.parallelism
                 : static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;

  auto node_priority = [&](double distance, int cnot) {
    if (mode == SearchMode::BFS) return static_cast<double>(cnot);
    if (!std::isfinite(distance)) return kInf;
    return heuristic(distance, cfg.heuristic_slope) + cnot;
  };

  // Optimizes one structure. The optimizer's stop target sits three orders
  // below epsilon so accepted solutions land deep under the threshold
  // instead of clustering against it.
  auto optimize_node = [&](const CircuitStructure& st,
                           const std::vector<double>* seed,
                           std::uint64_t task_seed) {
    EvalPlan plan(st);
    ObjectiveSpec spec;
    spec.dimension = st.param_count;
    spec.evaluate = [&plan, &target](std::span<const double> x) {
      return hs_distance(plan.evaluate(x), target);
    };
    spec.budget = cfg.optimizer_budget > 0
                      ? cfg.optimizer_budget
                      : 10000L * std::max(1, st.param_count / 30);
    spec.target_value = cfg.epsilon * 1e-3;
    OptimizeOutcome o = multistart_minimize(spec, cfg.restarts,
                                            mix_seed(task_seed, 1),
                                            cfg.optimizer, seed);
    TaskOutcome out;
    out.distance = std::isfinite(o.best_value) ? o.best_value : kInf;
    out.params = std::move(o.best_point);
    if (static_cast<int>(out.params.size()) != st.param_count) {
      out.params.assign(static_cast<std::size_t>(st.param_count), 0.0);
    }
    out.evals = o.evaluations_used;
    out.calls = o.restarts_used;
    out.nans = o.nan_aborts;
    return out;
  };

  SearchResult result;
  std::vector<NodeRecord> pool;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, EntryWorse> frontier;
  std::uint64_t next_uid = 0;

  auto finish = [&](long solution_index) {
    if (solution_index >= 0) {
      std::vector<long> chain;
      for (long i = solution_index; i >= 0; i = pool[i].parent) {
        chain.push_back(i);
      }
      std::reverse(chain.begin(), chain.end());
      for (long i : chain) {
        result.solution_path.push_back({pool[i].cnot, pool[i].distance});
      }
      NodeRecord& rec = pool[solution_index];
      result.solution = SearchNode{std::move(rec.structure), rec.distance,
                                   std::move(rec.params), rec.priority};
    }
    result.wall_time = elapsed();
    return std::move(result);
  };

  // Root: every wire gets a free single-qubit gate; no warm start exists yet.
  {
    CircuitStructure root_structure = root(n);
    const std::uint64_t uid = next_uid++;
    TaskOutcome r = optimize_node(root_structure, nullptr,
                                  mix_seed(cfg.rng_seed, uid));
    result.optimizer_calls += r.calls;
    result.objective_evals += r.evals;
    result.nan_aborts += r.nans;
    const double prio = node_priority(r.distance, 0);
    result.trace.push_back(
        {0, r.distance, prio, "root", r.evals, elapsed()});
    pool.push_back({std::move(root_structure), std::move(r.params), r.distance,
                    prio, 0, -1});
    if (r.distance < cfg.epsilon) return finish(0);
    if (0 < delta) frontier.push({prio, 0, 0});
  }

  const std::vector<std::pair<int, int>> places =
      placements(topo, cfg.both_orientations);

  struct Task {
    long parent = -1;
    int place = 0;
    std::uint64_t uid = 0;
    CircuitStructure structure;
    std::vector<double> seed;
    bool has_seed = false;
  };

  while (!frontier.empty()) {
    std::vector<long> popped;
    for (int b = 0; b < cfg.beam_width && !frontier.empty(); ++b) {
      popped.push_back(frontier.top().pool_index);
      frontier.pop();
    }
    result.nodes_expanded += static_cast<long>(popped.size());

    std::vector<Task> tasks;
    tasks.reserve(popped.size() * places.size());
    for (long parent : popped) {
      for (std::size_t pi = 0; pi < places.size(); ++pi) {
        Task t;
        t.parent = parent;
        t.place = static_cast<int>(pi);
        t.uid = next_uid++;
        t.structure = expand(pool[parent].structure, places[pi], gate_set);
        if (cfg.warm_start) {
          // Inherited slots start at the parent optimum; the new block's
          // slots start near zero (a fresh CNOT block at zero angles is
          // close to undoing itself, which keeps the parent's landscape).
          t.seed = pool[parent].params;
          t.seed.resize(static_cast<std::size_t>(t.structure.param_count),
                        0.0);
          std::mt19937_64 rng(mix_seed(mix_seed(cfg.rng_seed, t.uid), 0));
          std::uniform_real_distribution<double> small(-0.1, 0.1);
          for (std::size_t k = pool[parent].params.size();
               k < t.seed.size(); ++k) {
            t.seed[k] = small(rng);
          }
          t.has_seed = true;
        }
        tasks.push_back(std::move(t));
      }
    }

    std::vector<TaskOutcome> outcomes(tasks.size());
    std::atomic<std::size_t> cursor{0};
    auto drain = [&]() {
      for (std::size_t i = cursor.fetch_add(1); i < tasks.size();
           i = cursor.fetch_add(1)) {
        outcomes[i] = optimize_node(
            tasks[i].structure, tasks[i].has_seed ? &tasks[i].seed : nullptr,
            mix_seed(cfg.rng_seed, tasks[i].uid));
      }
    };
    const int workers =
        static_cast<int>(std::min<std::size_t>(jobs, tasks.size()));
    if (workers <= 1) {
      drain();
    } else {
      std::vector<std::thread> threads;
      threads.reserve(workers);
      for (int w = 0; w < workers; ++w) threads.emplace_back(drain);
      for (std::thread& th : threads) th.join();
    }

    // Acceptance and pushes run in task creation order, so the outcome does
    // not depend on which worker finished first.
    long accepted = -1;
    const double now = elapsed();
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      TaskOutcome& out = outcomes[i];
      const int ccnot = pool[tasks[i].parent].cnot + 1;
      const double prio = node_priority(out.distance, ccnot);
      result.optimizer_calls += out.calls;
      result.objective_evals += out.evals;
      result.nan_aborts += out.nans;
      result.trace.push_back({ccnot, out.distance, prio,
                              placement_name(places[tasks[i].place]),
                              out.evals, now});
      if (accepted >= 0) continue;
      if (out.distance < cfg.epsilon) {
        pool.push_back({std::move(tasks[i].structure), std::move(out.params),
                        out.distance, prio, ccnot, tasks[i].parent});
        accepted = static_cast<long>(pool.size()) - 1;
      } else if (ccnot < delta && std::isfinite(out.distance)) {
        pool.push_back({std::move(tasks[i].structure), std::move(out.params),
                        out.distance, prio, ccnot, tasks[i].parent});
        frontier.push({prio, ccnot, static_cast<long>(pool.size()) - 1});
      } else if (ccnot < delta) {
        // Aborted optimization: keep the node reachable with infinite
        // priority rather than silently pruning the subtree.
        pool.push_back({std::move(tasks[i].structure), std::move(out.params),
                        kInf, prio, ccnot, tasks[i].parent});
        frontier.push({prio, ccnot, static_cast<long>(pool.size()) - 1});
      }
    }
    if (accepted >= 0) return finish(accepted);
  }

  return finish(-1);
}

}  // namespace

int default_delta(int num_qubits) {
  switch (num_qubits) {
    case 1:
      return 0;
    case 2:
      return 3;
    case 3:
      return 20;
    case 4:
      return 100;
    default:
      throw std::invalid_argument(
          "default_delta: no built-in CNOT budget for " +
          std::to_string(num_qubits) + " qubits; set delta explicitly");
  }
}

double heuristic(double distance, double slope) {
  if (!(distance >= 0.0)) {
    throw std::invalid_argument("heuristic: distance must be >= 0");
  }
  return slope * distance;
}

SearchResult synthesize(const Unitary& target, const Topology& topo,
                        const GateSet& gate_set, const SearchConfig& cfg) {
  return run_search(target, topo, gate_set, cfg, cfg.mode);
}

SearchResult synthesize_bfs(const Unitary& target, const Topology& topo,
                            const GateSet& gate_set, const SearchConfig& cfg) {
  return run_search(target, topo, gate_set, cfg, SearchMode::BFS);
}

FitResult fit_heuristic(const std::vector<FitPoint>& points, bool affine) {
  const std::size_t m = points.size();
  if (m < 2) {
    throw std::invalid_argument("fit_heuristic: need at least 2 points");
  }
  double xmin = points[0].distance, xmax = points[0].distance;
  for (const FitPoint& p : points) {
    xmin = std::min(xmin, p.distance);
    xmax = std::max(xmax, p.distance);
  }
  if (xmax - xmin == 0.0) {
    throw std::invalid_argument(
        "fit_heuristic: degenerate fit, all distances equal");
  }

  FitResult fit;
  fit.points = m;
  fit.affine = affine;
  if (!affine) {
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const FitPoint& p : points) {
      sxx += p.distance * p.distance;
      sxy += p.distance * p.remaining_cnots;
      syy += p.remaining_cnots * p.remaining_cnots;
    }
    fit.slope = sxy / sxx;
    double ss_res = 0.0;
    for (const FitPoint& p : points) {
      const double r = p.remaining_cnots - fit.slope * p.distance;
      ss_res += r * r;
    }
    fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  } else {
    double sx = 0.0, sy = 0.0;
    for (const FitPoint& p : points) {
      sx += p.distance;
      sy += p.remaining_cnots;
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const FitPoint& p : points) {
      sxx += (p.distance - mx) * (p.distance - mx);
      sxy += (p.distance - mx) * (p.remaining_cnots - my);
      syy += (p.remaining_cnots - my) * (p.remaining_cnots - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (const FitPoint& p : points) {
      const double r =
          p.remaining_cnots - (fit.slope * p.distance + fit.intercept);
      ss_res += r * r;
    }
    fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  }
  return fit;
}

std::vector<FitPoint> path_fit_points(const SearchResult& result) {
  if (!result.solution.has_value()) {
    throw std::invalid_argument("path_fit_points: result has no solution");
  }
  const int total = result.solution_path.empty()
                        ? 0
                        : result.solution_path.back().cnot;
  std::vector<FitPoint> points;
  points.reserve(result.solution_path.size());
  for (const PathPoint& p : result.solution_path) {
    points.push_back(
        {p.distance, static_cast<double>(total - p.cnot)});
  }
  return points;
}

void write_trace_csv(std::ostream& out,
                     const std::vector<TraceRecord>& trace) {
  out << "cnot,distance,priority,placement,evals,seconds\n";
  for (const TraceRecord& r : trace) {
    out << r.cnot << ',' << format_double(r.distance) << ','
        << format_double(r.priority) << ',' << r.placement << ',' << r.evals
        << ',' << format_double(r.seconds) << '\n';
  }
}

}  // namespace qsynth
