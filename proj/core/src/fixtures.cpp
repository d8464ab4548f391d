#include "qsynth/fixtures.hpp"

#include "qsynth/gates.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace qsynth {

namespace {

Unitary permutation(std::size_t dim,
                    const std::vector<std::pair<std::size_t, std::size_t>>&
                        moves) {
  // moves are (from, to): column `from` gets its 1 in row `to`.
  Unitary u = CMatrix::identity(dim);
  for (const auto& [from, to] : moves) {
    u(from, from) = 0.0;
    u(to, from) = 1.0;
  }
  return u;
}

CMatrix hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  CMatrix h(2, 2);
  h(0, 0) = s;
  h(0, 1) = s;
  h(1, 0) = s;
  h(1, 1) = -s;
  return h;
}

CMatrix ry_matrix(double angle) {
  CMatrix r(2, 2);
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  r(0, 0) = c;
  r(0, 1) = -s;
  r(1, 0) = s;
  r(1, 1) = c;
  return r;
}

}  // namespace

Unitary qft(int qubits) {
  if (qubits < 1) throw std::invalid_argument("qft: qubits must be >= 1");
  const std::size_t dim = std::size_t{1} << qubits;
  const double inv = 1.0 / std::sqrt(static_cast<double>(dim));
  const double w = 2.0 * std::numbers::pi / static_cast<double>(dim);
  Unitary f(dim, dim);
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t k = 0; k < dim; ++k) {
      const double phase = w * static_cast<double>(j * k % dim);
      f(j, k) = cplx(std::cos(phase) * inv, std::sin(phase) * inv);
    }
  }
  return f;
}

Unitary toffoli() { return permutation(8, {{6, 7}, {7, 6}}); }

Unitary fredkin() { return permutation(8, {{5, 6}, {6, 5}}); }

Unitary peres() {
  return permutation(8, {{4, 6}, {5, 7}, {6, 5}, {7, 4}});
}

Unitary or_gate() {
  return permutation(8, {{2, 3}, {3, 2}, {4, 5}, {5, 4}, {6, 7}, {7, 6}});
}

Unitary hhl() {
  constexpr int n = 3;
  const CMatrix h_clock = embed_gate(hadamard(), {0}, n);
  const CMatrix cx_cb = embed_gate(cnot_matrix(), {0, 1}, n);

  // Eigenvalue-conditioned ancilla rotation: clock 0 block (eigenvalue 2)
  // gets Ry(pi/3), clock 1 block (eigenvalue 1) gets Ry(pi).
  const CMatrix r0 = kron(CMatrix::identity(2), ry_matrix(std::numbers::pi / 3));
  const CMatrix r1 = kron(CMatrix::identity(2), ry_matrix(std::numbers::pi));
  CMatrix rot(8, 8);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      rot(r, c) = r0(r, c);
      rot(r + 4, c + 4) = r1(r, c);
    }
  }

  // Time order: phase estimation, rotation, inverse phase estimation. The
  // product is symmetric, newest factor on the left.
  CMatrix u = h_clock;
  u = matmul(cx_cb, u);
  u = matmul(h_clock, u);
  u = matmul(rot, u);
  u = matmul(h_clock, u);
  u = matmul(cx_cb, u);
  u = matmul(h_clock, u);
  return u;
}

std::vector<BenchmarkCase> benchmark_suite() {
  std::vector<BenchmarkCase> suite;
  suite.push_back({"qft2", 2, qft(2)});
  suite.push_back({"qft3", 3, qft(3)});
  suite.push_back({"toffoli", 3, toffoli()});
  suite.push_back({"fredkin", 3, fredkin()});
  suite.push_back({"peres", 3, peres()});
  suite.push_back({"or", 3, or_gate()});
  suite.push_back({"hhl", 3, hhl()});
  return suite;
}

const BenchmarkCase& benchmark_case(const std::string& name) {
  static const std::vector<BenchmarkCase> suite = benchmark_suite();
  for (const BenchmarkCase& c : suite) {
    if (c.name == name) return c;
  }
  std::string names;
  for (const BenchmarkCase& c : suite) {
    if (!names.empty()) names += ", ";
    names += c.name;
  }
  throw std::invalid_argument("unknown benchmark '" + name +
                              "' (expected one of: " + names + ")");
}

}  // namespace qsynth
