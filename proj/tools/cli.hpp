#pragma once

// Command implementations behind the qsynth binary. Each cmd_* returns the
// process exit code (0 success, 1 queue exhausted under the CNOT budget,
// 2 input error) and writes human/machine output to the given streams, so
// tests can drive them without spawning processes.

#include "qsynth/topology.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qsynth {

// "line:N", "triangle", or "file:PATH". Throws std::invalid_argument.
Topology parse_topology_spec(const std::string& spec);

struct SynthOptions {
  std::string unitary_file;
  // Empty means a line over as many qubits as the unitary needs.
  std::string topology;
  std::string gate_set = "cnot";
  double epsilon = 1e-10;
  int delta = -1;  // negative: default CNOT budget for the register size
  int beam = 1;
  double slope = 9.3623;
  std::string mode = "astar";
  int jobs = 0;
  std::uint64_t seed = 0;
  int restarts = 8;
  bool native = false;
  bool no_simplify = false;
  bool both_orientations = false;
  std::string optimizer = "cobyla";
  std::string trace_path;
  // Empty: input path with its extension replaced by ".qasm".
  std::string output;
};

int cmd_synth(const SynthOptions& opt, std::ostream& out, std::ostream& err);

struct VerifyOptions {
  std::string circuit_file;
  std::string unitary_file;
  int trials = 1000;
  std::uint64_t seed = 0;
};

int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err);

struct FitOptions {
  // Benchmark names to run BFS on; ignored when points_file is given.
  std::vector<std::string> benchmarks;
  // CSV of existing (distance, remaining-CNOTs) rows to fit directly.
  std::string points_file;
  std::string topology = "line";  // line or triangle for 3-qubit benchmarks
  bool affine = false;
  double epsilon = 1e-10;
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string output;  // optional report file
};

int cmd_fit_heuristic(const FitOptions& opt, std::ostream& out,
                      std::ostream& err);

struct BenchOptions {
  // "standard" (or "all") for the whole suite, otherwise a benchmark name.
  std::string suite = "standard";
  int repetitions = 1;
  double epsilon = 1e-10;
  std::uint64_t seed = 0;
  int jobs = 0;
};

int cmd_bench(const BenchOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace qsynth
