#include "qsynth/topology.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <stdexcept>

namespace qsynth {

Topology Topology::line(int n) {
  if (n < 1) throw std::invalid_argument("line topology needs at least 1 qubit");
  Topology t;
  t.num_qubits = n;
  for (int i = 0; i + 1 < n; ++i) t.edges.emplace_back(i, i + 1);
  return t;
}

Topology Topology::triangle() {
  Topology t;
  t.num_qubits = 3;
  t.edges = {{0, 1}, {0, 2}, {1, 2}};
  return t;
}

Topology Topology::from_edge_list(std::istream& in) {
  Topology t;
  if (!(in >> t.num_qubits)) {
    throw std::invalid_argument("edge list: missing qubit count");
  }
  int a, b;
  while (in >> a >> b) {
    t.edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  if (!in.eof()) throw std::invalid_argument("edge list: malformed pair line");
  std::sort(t.edges.begin(), t.edges.end());
  t.validate();
  return t;
}

Topology Topology::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open topology file '" + path + "'");
  return from_edge_list(in);
}

bool Topology::has_edge(int a, int b) const {
  const auto e = std::make_pair(std::min(a, b), std::max(a, b));
  return std::binary_search(edges.begin(), edges.end(), e);
}

void Topology::validate() const {
  if (num_qubits < 1) throw std::invalid_argument("topology: empty register");
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= num_qubits || b >= num_qubits) {
      throw std::invalid_argument("topology: edge index out of range");
    }
    if (a == b) throw std::invalid_argument("topology: self-loop");
  }
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i] == edges[i - 1]) {
      throw std::invalid_argument("topology: duplicate edge");
    }
  }
  // Connectivity via union-find; a disconnected graph cannot host circuits
  // spanning its components.
  std::vector<int> parent(num_qubits);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : edges) parent[find(a)] = find(b);
  for (int q = 1; q < num_qubits; ++q) {
    if (find(q) != find(0)) throw std::invalid_argument("topology: disconnected");
  }
}

std::vector<std::pair<int, int>> placements(const Topology& t,
                                            bool both_orientations) {
  std::vector<std::pair<int, int>> out;
  out.reserve(t.edges.size() * (both_orientations ? 2 : 1));
  for (auto [lo, hi] : t.edges) {
    out.emplace_back(lo, hi);
    if (both_orientations) out.emplace_back(hi, lo);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace qsynth
