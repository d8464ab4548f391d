#pragma once

// Benchmark target unitaries, each built analytically from its textbook
// definition. Everything here follows the register convention that qubit 0
// is the most significant basis-index bit.

#include "qsynth/matrix.hpp"

#include <string>
#include <vector>

namespace qsynth {

// Discrete Fourier transform on 2^qubits amplitudes:
// F[j, k] = exp(2 pi i j k / N) / sqrt(N).
Unitary qft(int qubits);

// |a, b, c> -> |a, b, c ^ (a & b)>: swaps basis states 6 and 7.
Unitary toffoli();

// Controlled swap |a, b, c> -> a ? |a, c, b> : unchanged.
Unitary fredkin();

// |a, b, c> -> |a, a ^ b, c ^ (a & b)>.
Unitary peres();

// |a, b, c> -> |a, b, c ^ (a | b)>.
Unitary or_gate();

// Three-qubit linear-solver circuit for A = [[1.5, 0.5], [0.5, 1.5]] with
// one clock qubit (wire 0), the data wire |b> (wire 1) and the rotation
// ancilla (wire 2). Phase estimation collapses to Hadamard-conjugated CNOTs
// because exp(i pi A) is exactly X on the data wire; the eigenvalue-
// conditioned ancilla rotations are Ry(pi/3) and Ry(pi). Post-selecting
// clock 0 and ancilla 1 leaves the data wire proportional to A^{-1} |b>,
// which the tests check directly; the smallest instance with an exactly
// representable phase estimation stage.
Unitary hhl();

struct BenchmarkCase {
  std::string name;
  int num_qubits = 0;
  Unitary matrix;
};

// qft2, qft3, toffoli, fredkin, peres, or, hhl.
std::vector<BenchmarkCase> benchmark_suite();

// Lookup by name; throws std::invalid_argument listing valid names.
const BenchmarkCase& benchmark_case(const std::string& name);

}  // namespace qsynth
