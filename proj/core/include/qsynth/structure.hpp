#pragma once

// The search node: an ordered circuit skeleton with parameter slots. A
// structure is the root layer (one parameterized single-qubit gate per wire)
// followed by expansion blocks, each a two-qubit gate plus parameterized
// single-qubit gates on the two wires it touched.
//
// Steps apply left to right in time; evaluation multiplies the newest step on
// the left, so evaluate([.. s2, s1, s0]) = M(s2) M(s1) M(s0).

#include "qsynth/gates.hpp"
#include "qsynth/matrix.hpp"
#include "qsynth/topology.hpp"

#include <span>
#include <utility>
#include <vector>

namespace qsynth {

// One parameterized single-qubit gate slot. arity 3 is a full U3; arity 2 is
// the control-line simplified gate U3(theta, phi, 0).
struct SingleGate {
  int wire = -1;
  int arity = 3;
  int param_offset = -1;
};

struct Step {
  enum class Kind { SingleLayer, TwoQubit };
  Kind kind = Kind::SingleLayer;

  // SingleLayer: gates on distinct wires, applied simultaneously.
  std::vector<SingleGate> gates;

  // TwoQubit
  int control = -1;
  int target = -1;
  TwoQubitKind tq_kind = TwoQubitKind::CNOT;
  int tq_arity = 0;  // 0 for CNOT, 1 for CRZ
  int tq_param_offset = -1;
};

struct CircuitStructure {
  int num_qubits = 0;
  std::vector<Step> steps;
  int param_count = 0;
};

using ParamView = std::span<const double>;

// Root of the search tree: one full U3 slot on every wire, no two-qubit gates.
CircuitStructure root(int num_qubits);

// Appends one expansion block for the given (control, target) placement.
// Parameter count grows by gate_set.expansion_param_arity(). The caller is
// responsible for placement legality against the topology.
CircuitStructure expand(const CircuitStructure& n,
                        std::pair<int, int> placement, const GateSet& gate_set);

// Step-by-step evaluation: embeds each step at full register width and
// multiplies. This is the reference semantics; optimize_eval_order below is
// the fast route and is tested against this one.
CMatrix evaluate(const CircuitStructure& n, ParamView x);

int cnot_count(const CircuitStructure& n);

// Emitted hardware gate budget Q + 5 * cnot_count: every single-qubit slot
// costs at most two fixed X pulses plus free software Z rotations.
int total_gate_bound(const CircuitStructure& n);

// Number of full-register matrix products the reference evaluation performs.
int naive_full_width_products(const CircuitStructure& n);

// Precomputed evaluation plan. The root layer is materialized directly from
// per-wire 2x2 gates (disjoint wires fused into one pass, no full-width
// product), and each expansion block collapses to a single 4x4 gate, the
// block's two single-qubit gates times its two-qubit gate, applied to the
// working matrix as a two-wire contraction.
class EvalPlan {
public:
  explicit EvalPlan(const CircuitStructure& n);

  CMatrix evaluate(ParamView x) const;

  int num_qubits() const { return num_qubits_; }
  int param_count() const { return param_count_; }
  // Full-register matrix products performed per evaluation (always 0; the
  // accessor exists so tests can compare against the naive route).
  int full_width_products() const { return 0; }

private:
  struct Block {
    int control, target;
    TwoQubitKind tq_kind;
    int tq_param_offset;  // meaningful for CRZ only
    SingleGate control_gate;
    SingleGate target_gate;
  };

  int num_qubits_ = 0;
  int param_count_ = 0;
  std::size_t dim_ = 0;
  std::vector<SingleGate> init_;  // root layer, one gate per wire in order
  std::vector<Block> blocks_;
  // Per block: base row indices with both wire bits clear, plus the two bit
  // strides, precomputed so evaluate is allocation-light.
  std::vector<std::vector<std::size_t>> block_bases_;
  std::vector<std::pair<std::size_t, std::size_t>> block_strides_;
};

EvalPlan optimize_eval_order(const CircuitStructure& n);

}  // namespace qsynth
