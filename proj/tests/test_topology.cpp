#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qsynth/topology.hpp"

#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

using namespace qsynth;

using Edge = std::pair<int, int>;

TEST_CASE("line topology connects consecutive wires") {
  const Topology t = Topology::line(4);
  CHECK(t.num_qubits == 4);
  CHECK(t.edges == std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}});
  CHECK(t.has_edge(1, 2));
  CHECK(t.has_edge(2, 1));
  CHECK_FALSE(t.has_edge(0, 2));
  t.validate();

  const Topology single = Topology::line(1);
  CHECK(single.num_qubits == 1);
  CHECK(single.edges.empty());
  single.validate();

  CHECK_THROWS_AS(Topology::line(0), std::invalid_argument);
}

TEST_CASE("triangle topology is the complete 3-qubit graph") {
  const Topology t = Topology::triangle();
  CHECK(t.num_qubits == 3);
  CHECK(t.edges == std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}});
  t.validate();
}

TEST_CASE("placements enumerate edges in canonical order") {
  const Topology line3 = Topology::line(3);
  CHECK(placements(line3) == std::vector<Edge>{{0, 1}, {1, 2}});
  // Reversed orientations interleave after the canonical list, still sorted
  // by (control, target).
  CHECK(placements(line3, true) ==
        std::vector<Edge>{{0, 1}, {1, 0}, {1, 2}, {2, 1}});
  CHECK(placements(Topology::triangle()).size() == 3);
  CHECK(placements(Topology::triangle(), true).size() == 6);
  CHECK(placements(Topology::line(1)).empty());
}

TEST_CASE("edge-list text round trips") {
  const Topology t = Topology::triangle();
  std::stringstream s;
  s << t.num_qubits << "\n";
  for (const auto& [a, b] : t.edges) s << a << " " << b << "\n";
  const Topology back = Topology::from_edge_list(s);
  CHECK(back.num_qubits == t.num_qubits);
  CHECK(back.edges == t.edges);
}

TEST_CASE("edge-list reader normalizes order and orientation") {
  std::stringstream s("3\n2 1\n1 0\n");
  const Topology t = Topology::from_edge_list(s);
  CHECK(t.edges == std::vector<Edge>{{0, 1}, {1, 2}});
  t.validate();
}

TEST_CASE("validate rejects malformed graphs") {
  auto check_throws = [](int n, std::vector<Edge> edges) {
    Topology t;
    t.num_qubits = n;
    t.edges = std::move(edges);
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  };
  check_throws(2, {{0, 2}});          // out of range
  check_throws(2, {{-1, 0}});         // negative index
  check_throws(2, {{1, 1}});          // self loop
  check_throws(2, {{0, 1}, {0, 1}});  // duplicate
  check_throws(3, {{0, 1}});          // wire 2 disconnected
  check_throws(4, {{0, 1}, {2, 3}});  // two components
  check_throws(0, {});
}

TEST_CASE("edge-list reader reports malformed input") {
  {
    std::stringstream s("");
    CHECK_THROWS_AS(Topology::from_edge_list(s), std::invalid_argument);
  }
  {
    std::stringstream s("3\n0 x\n");
    CHECK_THROWS_AS(Topology::from_edge_list(s), std::invalid_argument);
  }
  {
    // A trailing half pair drops off at EOF and leaves wire 2 unreachable.
    std::stringstream s("3\n0 1\n1\n");
    CHECK_THROWS_AS(Topology::from_edge_list(s), std::invalid_argument);
  }
  CHECK_THROWS_AS(Topology::from_file("no_such_topology.txt"),
                  std::invalid_argument);
}
