#pragma once

// Assembly-text emission and ingestion. The dialect is OpenQASM-2 compatible
// and restricted to the vocabulary the synthesizer produces: u3, rz, rx, cx,
// crz on a single register q[N]. Native mode replaces every u3 with its
// software-Z / fixed-X-pulse expansion.

#include "qsynth/gates.hpp"
#include "qsynth/matrix.hpp"
#include "qsynth/structure.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace qsynth {

struct Instruction {
  enum class Kind { U3, RZ, RX, CX, CRZ };
  Kind kind = Kind::U3;
  int q0 = -1;  // the single-qubit target, or the control of cx/crz
  int q1 = -1;  // the target of cx/crz, otherwise unused
  // u3 carries 3 angles, rz/rx/crz carry 1, cx none.
  std::vector<double> angles;

  bool operator==(const Instruction&) const = default;
};

struct EmittedCircuit {
  int num_qubits = 0;
  std::string header;  // register declaration, "qreg q[N];"
  // Time order: instructions[0] acts first.
  std::vector<Instruction> instructions;

  long count(Instruction::Kind kind) const;
  long two_qubit_count() const;
};

// Flattens an instantiated structure into time-ordered instructions.
// Control-line simplified slots emit u3(theta, phi, 0). With native set,
// each u3 becomes rz(lambda), rx(pi/2), rz(theta+pi), rx(pi/2), rz(phi+pi)
// in time order; two-qubit gates are left alone.
EmittedCircuit emit_circuit(const CircuitStructure& structure, ParamView params,
                            bool native = false);

// Full program text with the OPENQASM 2.0 prologue. Angles are printed with
// round-trip precision; the only symbolic literal emitted is rx(pi/2).
std::string to_qasm(const EmittedCircuit& circuit);
void write_qasm(std::ostream& out, const EmittedCircuit& circuit);

// Parses the dialect above (plus blank lines, // comments, and pi-form
// angle literals like pi/2 or -3*pi/4). Throws std::runtime_error naming
// the 1-based line of the first offending token.
EmittedCircuit parse_qasm(std::istream& in);
EmittedCircuit parse_qasm_file(const std::string& path);

// Product of the instruction list as a full-register unitary.
Unitary circuit_unitary(const EmittedCircuit& circuit);

}  // namespace qsynth
