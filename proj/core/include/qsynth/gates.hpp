#pragma once

// Native gate vocabulary: the parameterized single-qubit gate U3, the fixed
// CNOT, the parameterized CRZ, the software/hardware rotation split used for
// emission, and identity-padded embedding into a full register.
//
// Register convention used everywhere: qubit 0 is the most significant bit of
// the computational basis index, so a gate on the last two wires of a 3-qubit
// register embeds as I2 (x) G.

#include "qsynth/matrix.hpp"

#include <vector>

namespace qsynth {

struct U3Params {
  double theta = 0.0;
  double phi = 0.0;
  double lambda = 0.0;
};

enum class TwoQubitKind { CNOT, CRZ };

// Gate vocabulary for one synthesis run. single-qubit slots carry 3 angles;
// when simplify_control is set, the single-qubit gate that lands on the
// control wire right after a two-qubit gate carries only 2 (its lambda slot
// is dropped, because a trailing Rz commutes through the control line and is
// absorbed by the previous gate on that wire).
struct GateSet {
  TwoQubitKind two_qubit_kind = TwoQubitKind::CNOT;
  bool simplify_control = true;

  int two_qubit_param_arity() const {
    return two_qubit_kind == TwoQubitKind::CRZ ? 1 : 0;
  }
  int single_qubit_param_arity() const { return 3; }
  int control_param_arity() const { return simplify_control ? 2 : 3; }
  // Parameters added by one expansion step: the two-qubit gate plus the two
  // trailing single-qubit gates. 6 for plain CNOT, 7 for plain CRZ, one less
  // each with the control-line simplification.
  int expansion_param_arity() const {
    return two_qubit_param_arity() + control_param_arity() +
           single_qubit_param_arity();
  }
  bool orientation_sensitive() const {
    return two_qubit_kind == TwoQubitKind::CNOT;
  }

  static GateSet cnot(bool simplify = true) {
    return {TwoQubitKind::CNOT, simplify};
  }
  static GateSet crz(bool simplify = true) {
    return {TwoQubitKind::CRZ, simplify};
  }
};

// U3(theta, phi, lambda) =
//   [ cos(theta/2)                -e^{i lambda} sin(theta/2)       ]
//   [ e^{i phi} sin(theta/2)       e^{i (lambda+phi)} cos(theta/2) ]
CMatrix u3_matrix(const U3Params& p);

CMatrix rz_matrix(double angle);  // diag(e^{-i a/2}, e^{i a/2})
CMatrix rx_matrix(double angle);
CMatrix cnot_matrix();            // control is the first (more significant) qubit
CMatrix crz_matrix(double angle); // diag(1, 1, e^{-i a/2}, e^{i a/2})

// Inverse of u3_matrix up to global phase, defined for any 2x2 unitary.
// u3_matrix(u3_params_from(u)) matches u to hs_distance ~1e-15.
U3Params u3_params_from(const CMatrix& u);

struct NativeRotation {
  enum class Axis { Z, X };
  Axis axis;
  double angle;  // X rotations are always pi/2 (the fixed hardware pulse)
};

// Split of U3 into software Z rotations around two fixed Rx(pi/2) pulses.
// The naive angle assignment Rz(theta) Rx Rz(phi) Rx Rz(lambda) does not
// reproduce U3; the corrected assignment, pinned numerically over random
// parameter triples, is
//   U3(theta, phi, lambda) = Rz(phi + pi) Rx(pi/2) Rz(theta + pi) Rx(pi/2) Rz(lambda)
// up to a global phase. The returned sequence is in matrix-product order
// (first element is the leftmost factor, i.e. the last gate applied in time).
std::vector<NativeRotation> decompose_u3(const U3Params& p);

// Ordered product of a rotation sequence in the given (matrix-product) order.
CMatrix native_product(const std::vector<NativeRotation>& seq);

// Identity-padded embedding of a 1- or 2-qubit gate onto the named wires of a
// total_qubits register. qubits[0] is the more significant wire of the gate's
// own index space, so reversed and non-adjacent pairs work by bit permutation.
// Throws std::invalid_argument on out-of-range or duplicate indices, or when
// the gate dimension does not match the wire count.
CMatrix embed_gate(const CMatrix& gate, const std::vector<int>& qubits,
                   int total_qubits);

}  // namespace qsynth
