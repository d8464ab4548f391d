#include "cli.hpp"

#include "qsynth/fixtures.hpp"
#include "qsynth/gates.hpp"
#include "qsynth/matrix.hpp"
#include "qsynth/optimize.hpp"
#include "qsynth/qasm.hpp"
#include "qsynth/search.hpp"
#include "qsynth/verify.hpp"

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qsynth {

namespace {

int input_error(std::ostream& err, const std::string& msg) {
  err << "error: " << msg << '\n';
  return 2;
}

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

int log2_exact(std::size_t v) {
  int n = 0;
  while (v > 1) {
    v >>= 1;
    ++n;
  }
  return n;
}

std::string default_output_path(const std::string& input) {
  const std::size_t slash = input.find_last_of('/');
  const std::size_t dot = input.find_last_of('.');
  if (dot == std::string::npos ||
      (slash != std::string::npos && dot < slash)) {
    return input + ".qasm";
  }
  return input.substr(0, dot) + ".qasm";
}

GateSet parse_gate_set(const std::string& name, bool simplify) {
  if (name == "cnot") return GateSet::cnot(simplify);
  if (name == "crz") return GateSet::crz(simplify);
  throw std::invalid_argument("gate set must be cnot or crz, got '" + name +
                              "'");
}

OptimizerKind parse_optimizer(const std::string& name) {
  if (name == "cobyla") return OptimizerKind::Cobyla;
  if (name == "cmaes") return OptimizerKind::CmaEs;
  throw std::invalid_argument("optimizer must be cobyla or cmaes, got '" +
                              name + "'");
}

SearchMode parse_mode(const std::string& name) {
  if (name == "astar") return SearchMode::AStar;
  if (name == "bfs") return SearchMode::BFS;
  throw std::invalid_argument("mode must be astar or bfs, got '" + name +
                              "'");
}

}  // namespace

Topology parse_topology_spec(const std::string& spec) {
  if (spec == "triangle") return Topology::triangle();
  if (spec.rfind("line:", 0) == 0) {
    const std::string tail = spec.substr(5);
    char* end = nullptr;
    const long n = std::strtol(tail.c_str(), &end, 10);
    if (end != tail.c_str() + tail.size() || tail.empty() || n < 1) {
      throw std::invalid_argument("bad line topology '" + spec + "'");
    }
    return Topology::line(static_cast<int>(n));
  }
  if (spec.rfind("file:", 0) == 0) {
    return Topology::from_file(spec.substr(5));
  }
  throw std::invalid_argument(
      "topology must be line:N, triangle, or file:PATH, got '" + spec + "'");
}

int cmd_synth(const SynthOptions& opt, std::ostream& out, std::ostream& err) {
  Unitary target;
  try {
    target = read_unitary_file(opt.unitary_file);
  } catch (const std::exception& e) {
    return input_error(err, e.what());
  }
  if (target.rows() != target.cols() || !is_power_of_two(target.rows())) {
    return input_error(err, "unitary dimension " +
                                std::to_string(target.rows()) +
                                " is not a power of two");
  }
  if (!is_unitary(target, 1e-8)) {
    return input_error(err,
                       "input matrix fails the unitarity check at 1e-8");
  }
  const int qubits = log2_exact(target.rows());

  Topology topo;
  std::string topo_name = opt.topology;
  try {
    if (opt.topology.empty()) {
      topo = Topology::line(qubits);
      topo_name = "line:" + std::to_string(qubits);
    } else {
      topo = parse_topology_spec(opt.topology);
    }
  } catch (const std::exception& e) {
    return input_error(err, e.what());
  }
  if ((std::size_t{1} << topo.num_qubits) != target.rows()) {
    return input_error(
        err, "topology register (" + std::to_string(topo.num_qubits) +
                 " qubits) does not match the unitary dimension " +
                 std::to_string(target.rows()));
  }

  GateSet gate_set;
  SearchConfig cfg;
  try {
    gate_set = parse_gate_set(opt.gate_set, !opt.no_simplify);
    cfg.mode = parse_mode(opt.mode);
    cfg.optimizer.kind = parse_optimizer(opt.optimizer);
  } catch (const std::exception& e) {
    return input_error(err, e.what());
  }
  cfg.epsilon = opt.epsilon;
  cfg.delta = opt.delta;
  cfg.heuristic_slope = opt.slope;
  cfg.beam_width = opt.beam;
  cfg.parallelism = opt.jobs;
  cfg.rng_seed = opt.seed;
  cfg.restarts = opt.restarts;
  cfg.both_orientations = opt.both_orientations;

  SearchResult result;
  try {
    result = synthesize(target, topo, gate_set, cfg);
  } catch (const std::exception& e) {
    return input_error(err, e.what());
  }

  if (!opt.trace_path.empty()) {
    std::ofstream trace(opt.trace_path);
    if (!trace) {
      return input_error(err, "cannot write trace file: " + opt.trace_path);
    }
    write_trace_csv(trace, result.trace);
  }

  nlohmann::json summary;
  summary["input"] = opt.unitary_file;
  summary["qubits"] = qubits;
  summary["topology"] = topo_name;
  summary["gate_set"] = opt.gate_set;
  summary["mode"] = opt.mode;
  summary["epsilon"] = cfg.epsilon;
  summary["delta"] = cfg.delta >= 0 ? cfg.delta : default_delta(qubits);
  summary["seed"] = cfg.rng_seed;
  summary["nodes_expanded"] = result.nodes_expanded;
  summary["optimizer_calls"] = result.optimizer_calls;
  summary["objective_evals"] = result.objective_evals;
  summary["wall_time_seconds"] = result.wall_time;

  if (!result.solution) {
    summary["success"] = false;
    out << summary.dump(2) << '\n';
    err << "no solution within the CNOT budget (delta="
        << (cfg.delta >= 0 ? cfg.delta : default_delta(qubits)) << ")\n";
    return 1;
  }

  const SearchNode& sol = *result.solution;
  const std::string output_path =
      opt.output.empty() ? default_output_path(opt.unitary_file) : opt.output;
  EmittedCircuit circuit;
  try {
    circuit = emit_circuit(sol.structure, sol.params, opt.native);
    std::ofstream file(output_path);
    if (!file) throw std::runtime_error("cannot write " + output_path);
    write_qasm(file, circuit);
  } catch (const std::exception& e) {
    return input_error(err, e.what());
  }

  summary["success"] = true;
  summary["cnots"] = cnot_count(sol.structure);
  summary["distance"] = sol.distance;
  summary["instructions"] = circuit.instructions.size();
  summary["native"] = opt.native;
  summary["circuit_file"] = output_path;
  out << summary.dump(2) << '\n';
  return 0;
}

int cmd_verify(const VerifyOptions& opt, std::ostream& out,
               std::ostream& err) {
  if (opt.trials < 1) return input_error(err, "trials must be >= 1");
  EmittedCircuit circuit;
  Unitary target;
  try {
    circuit = parse_qasm_file(opt.circuit_file);
    target = read_unitary_file(opt.unitary_file);
  } catch (const std::exception& e) {
    return input_error(err, e.what());
  }
  const std::size_t dim = std::size_t{1} << circuit.num_qubits;
  if (target.rows() != dim || target.cols() != dim) {
    return input_error(
        err, "circuit register (" + std::to_string(circuit.num_qubits) +
                 " qubits) does not match the unitary dimension " +
                 std::to_string(target.rows()));
  }
  const Unitary u = circuit_unitary(circuit);
  const double distance = hs_distance(u, target);
  const double kl = verify_unitaries(u, target, opt.trials, opt.seed);
  out << "instructions=" << circuit.instructions.size() << '\n';
  out << "hs_distance=" << format_double(distance) << '\n';
  out << "max_kl=" << format_double(kl) << '\n';
  return 0;
}

namespace {

std::vector<FitPoint> read_points_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open points file: " + path);
  std::vector<FitPoint> points;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream row(line);
    double d, r;
    if (row >> d >> r) {
      points.push_back({d, r});
    } else if (lineno > 1 && line.find_first_not_of(" \t\r") !=
                                 std::string::npos) {
      // Only the first line may be a non-numeric header row.
      throw std::runtime_error("bad points row at line " +
                               std::to_string(lineno) + " of " + path);
    }
  }
  return points;
}

}  // namespace

int cmd_fit_heuristic(const FitOptions& opt, std::ostream& out,
                      std::ostream& err) {
  std::vector<FitPoint> points;
  try {
    if (!opt.points_file.empty()) {
      points = read_points_file(opt.points_file);
    } else {
      if (opt.benchmarks.empty()) {
        return input_error(
            err, "empty benchmark list: pass benchmark names or --points");
      }
      for (std::size_t i = 0; i < opt.benchmarks.size(); ++i) {
        const BenchmarkCase& c = benchmark_case(opt.benchmarks[i]);
        Topology topo = (c.num_qubits == 3 && opt.topology == "triangle")
                            ? Topology::triangle()
                            : Topology::line(c.num_qubits);
        SearchConfig cfg;
        cfg.mode = SearchMode::BFS;
        cfg.epsilon = opt.epsilon;
        cfg.parallelism = opt.jobs;
        cfg.rng_seed = mix_seed(opt.seed, i);
        SearchResult result =
            synthesize_bfs(c.matrix, topo, GateSet::cnot(), cfg);
        if (!result.solution) {
          err << "warning: no solution for benchmark '" << c.name
              << "', skipping its trace\n";
          continue;
        }
        for (const FitPoint& p : path_fit_points(result)) {
          points.push_back(p);
        }
      }
    }
    const FitResult fit = fit_heuristic(points, opt.affine);
    std::ostringstream report;
    report << "slope=" << format_double(fit.slope) << '\n';
    if (fit.affine) {
      report << "intercept=" << format_double(fit.intercept) << '\n';
    }
    report << "r2=" << format_double(fit.r2) << '\n';
    report << "points=" << fit.points << '\n';
    out << report.str();
    if (!opt.output.empty()) {
      std::ofstream file(opt.output);
      if (!file) {
        throw std::runtime_error("cannot write report file: " + opt.output);
      }
      file << report.str() << "# distance,remaining\n";
      for (const FitPoint& p : points) {
        file << format_double(p.distance) << ','
             << format_double(p.remaining_cnots) << '\n';
      }
    }
  } catch (const std::exception& e) {
    return input_error(err, e.what());
  }
  return 0;
}

int cmd_bench(const BenchOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.repetitions < 1) return input_error(err, "repetitions must be >= 1");
  std::vector<BenchmarkCase> cases;
  try {
    if (opt.suite == "standard" || opt.suite == "all") {
      cases = benchmark_suite();
    } else {
      cases.push_back(benchmark_case(opt.suite));
    }
  } catch (const std::exception& e) {
    return input_error(err, e.what());
  }

  char row[160];
  std::snprintf(row, sizeof(row), "%-10s %-10s %6s %12s %9s", "benchmark",
                "topology", "cnots", "distance", "seconds");
  out << row << '\n';
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const BenchmarkCase& c = cases[ci];
    // Two-qubit circuits have a single connected layout, so the triangle
    // column reruns the line; at three qubits the columns differ.
    const std::vector<std::pair<std::string, Topology>> topologies = {
        {"line", Topology::line(c.num_qubits)},
        {"triangle", c.num_qubits == 3 ? Topology::triangle()
                                       : Topology::line(c.num_qubits)}};
    for (std::size_t ti = 0; ti < topologies.size(); ++ti) {
      int best_cnots = -1;
      double best_distance = 0.0;
      double cell_seconds = 0.0;
      for (int rep = 0; rep < opt.repetitions; ++rep) {
        SearchConfig cfg;
        cfg.epsilon = opt.epsilon;
        cfg.parallelism = opt.jobs;
        cfg.rng_seed =
            mix_seed(opt.seed, (ci * topologies.size() + ti) * 1000 +
                                   static_cast<std::uint64_t>(rep));
        SearchResult result;
        try {
          result = synthesize(c.matrix, topologies[ti].second,
                              GateSet::cnot(), cfg);
        } catch (const std::exception& e) {
          return input_error(err, e.what());
        }
        cell_seconds += result.wall_time;
        if (result.solution) {
          const int cnots = cnot_count(result.solution->structure);
          if (best_cnots < 0 || cnots < best_cnots ||
              (cnots == best_cnots &&
               result.solution->distance < best_distance)) {
            best_cnots = cnots;
            best_distance = result.solution->distance;
          }
        }
      }
      if (best_cnots >= 0) {
        std::snprintf(row, sizeof(row), "%-10s %-10s %6d %12.3e %9.2f",
                      c.name.c_str(), topologies[ti].first.c_str(),
                      best_cnots, best_distance, cell_seconds);
      } else {
        std::snprintf(row, sizeof(row), "%-10s %-10s %6s %12s %9.2f",
                      c.name.c_str(), topologies[ti].first.c_str(), "-", "-",
                      cell_seconds);
      }
      out << row << '\n';
    }
  }
  return 0;
}

}  // namespace qsynth
