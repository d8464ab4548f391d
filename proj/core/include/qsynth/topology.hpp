#pragma once

// Coupling graph over qubit indices. Two-qubit gates may only be placed on
// edges of this graph during successor generation.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace qsynth {

struct Topology {
  int num_qubits = 0;
  // Normalized: first < second, sorted, no duplicates.
  std::vector<std::pair<int, int>> edges;

  static Topology line(int n);
  static Topology triangle();

  // Edge-list text format: first line n, then one "i j" pair per line.
  static Topology from_edge_list(std::istream& in);
  static Topology from_file(const std::string& path);

  bool has_edge(int a, int b) const;

  // Throws std::invalid_argument on out-of-range indices, self-loops,
  // duplicate edges, or a disconnected graph.
  void validate() const;
};

// Deterministic placement order for expansion, sorted by (control, target).
// Canonical orientation puts the lower index on the control line; the
// surrounding single-qubit gates absorb the orientation up to local
// equivalence. both_orientations additionally searches the reversed pairs.
std::vector<std::pair<int, int>> placements(const Topology& t,
                                            bool both_orientations = false);

}  // namespace qsynth
