#include "qsynth/structure.hpp"

#include <array>
#include <stdexcept>

namespace qsynth {

namespace {

CMatrix single_gate_matrix(const SingleGate& g, ParamView x) {
  const double theta = x[g.param_offset];
  const double phi = x[g.param_offset + 1];
  const double lambda = g.arity == 3 ? x[g.param_offset + 2] : 0.0;
  return u3_matrix({theta, phi, lambda});
}

CMatrix two_qubit_local(const Step& s, ParamView x) {
  if (s.tq_kind == TwoQubitKind::CRZ) return crz_matrix(x[s.tq_param_offset]);
  return cnot_matrix();
}

}  // namespace

CircuitStructure root(int num_qubits) {
  if (num_qubits < 1) throw std::invalid_argument("root: need at least 1 qubit");
  CircuitStructure n;
  n.num_qubits = num_qubits;
  Step layer;
  layer.kind = Step::Kind::SingleLayer;
  for (int w = 0; w < num_qubits; ++w) {
    layer.gates.push_back({w, 3, 3 * w});
  }
  n.steps.push_back(std::move(layer));
  n.param_count = 3 * num_qubits;
  return n;
}

CircuitStructure expand(const CircuitStructure& n,
                        std::pair<int, int> placement, const GateSet& gate_set) {
  const auto [control, target] = placement;
  if (control < 0 || target < 0 || control >= n.num_qubits ||
      target >= n.num_qubits || control == target) {
    throw std::invalid_argument("expand: bad placement");
  }
  CircuitStructure child = n;
  int offset = child.param_count;

  Step tq;
  tq.kind = Step::Kind::TwoQubit;
  tq.control = control;
  tq.target = target;
  tq.tq_kind = gate_set.two_qubit_kind;
  tq.tq_arity = gate_set.two_qubit_param_arity();
  tq.tq_param_offset = tq.tq_arity > 0 ? offset : -1;
  offset += tq.tq_arity;
  child.steps.push_back(std::move(tq));

  Step layer;
  layer.kind = Step::Kind::SingleLayer;
  const int control_arity = gate_set.control_param_arity();
  layer.gates.push_back({control, control_arity, offset});
  offset += control_arity;
  layer.gates.push_back({target, 3, offset});
  offset += 3;
  child.steps.push_back(std::move(layer));

  child.param_count = offset;
  return child;
}

CMatrix evaluate(const CircuitStructure& n, ParamView x) {
  if (static_cast<int>(x.size()) != n.param_count) {
    throw std::invalid_argument("evaluate: parameter count mismatch");
  }
  CMatrix u;
  bool first = true;
  for (const Step& s : n.steps) {
    CMatrix m;
    if (s.kind == Step::Kind::SingleLayer) {
      // kron chain over all wires, identity on wires the layer does not touch
      m = CMatrix::identity(1);
      for (int w = 0; w < n.num_qubits; ++w) {
        const SingleGate* g = nullptr;
        for (const SingleGate& cand : s.gates) {
          if (cand.wire == w) g = &cand;
        }
        m = kron(m, g ? single_gate_matrix(*g, x) : CMatrix::identity(2));
      }
    } else {
      m = embed_gate(two_qubit_local(s, x), {s.control, s.target}, n.num_qubits);
    }
    u = first ? std::move(m) : matmul(m, u);
    first = false;
  }
  return u;
}

int cnot_count(const CircuitStructure& n) {
  int count = 0;
  for (const Step& s : n.steps) {
    if (s.kind == Step::Kind::TwoQubit) ++count;
  }
  return count;
}

int total_gate_bound(const CircuitStructure& n) {
  return n.num_qubits + 5 * cnot_count(n);
}

int naive_full_width_products(const CircuitStructure& n) {
  return n.steps.size() <= 1 ? 0 : static_cast<int>(n.steps.size()) - 1;
}

EvalPlan::EvalPlan(const CircuitStructure& n)
    : num_qubits_(n.num_qubits),
      param_count_(n.param_count),
      dim_(std::size_t{1} << n.num_qubits) {
  if (n.steps.empty() || n.steps[0].kind != Step::Kind::SingleLayer ||
      n.steps[0].gates.size() != static_cast<std::size_t>(n.num_qubits)) {
    throw std::invalid_argument("EvalPlan: structure lacks a root layer");
  }
  init_.resize(n.num_qubits);
  for (const SingleGate& g : n.steps[0].gates) init_[g.wire] = g;

  for (std::size_t i = 1; i < n.steps.size(); i += 2) {
    const Step& tq = n.steps[i];
    if (tq.kind != Step::Kind::TwoQubit || i + 1 >= n.steps.size()) {
      throw std::invalid_argument("EvalPlan: malformed expansion block");
    }
    const Step& layer = n.steps[i + 1];
    if (layer.kind != Step::Kind::SingleLayer || layer.gates.size() != 2) {
      throw std::invalid_argument("EvalPlan: malformed expansion block");
    }
    Block b;
    b.control = tq.control;
    b.target = tq.target;
    b.tq_kind = tq.tq_kind;
    b.tq_param_offset = tq.tq_param_offset;
    for (const SingleGate& g : layer.gates) {
      if (g.wire == tq.control) {
        b.control_gate = g;
      } else if (g.wire == tq.target) {
        b.target_gate = g;
      } else {
        throw std::invalid_argument("EvalPlan: block gate off the block wires");
      }
    }
    blocks_.push_back(b);

    const std::size_t sc = std::size_t{1} << (num_qubits_ - 1 - b.control);
    const std::size_t st = std::size_t{1} << (num_qubits_ - 1 - b.target);
    block_strides_.emplace_back(sc, st);
    std::vector<std::size_t> bases;
    for (std::size_t r = 0; r < dim_; ++r) {
      if ((r & sc) == 0 && (r & st) == 0) bases.push_back(r);
    }
    block_bases_.push_back(std::move(bases));
  }
}

CMatrix EvalPlan::evaluate(ParamView x) const {
  if (static_cast<int>(x.size()) != param_count_) {
    throw std::invalid_argument("EvalPlan::evaluate: parameter count mismatch");
  }
  const std::size_t n = dim_;
  CMatrix u(n, n);

  // Root layer materialized entrywise from the per-wire 2x2 gates.
  std::array<std::array<cplx, 4>, 16> gw;
  for (int w = 0; w < num_qubits_; ++w) {
    const CMatrix g = single_gate_matrix(init_[w], x);
    gw[w] = {g(0, 0), g(0, 1), g(1, 0), g(1, 1)};
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      cplx v = 1.0;
      for (int w = 0; w < num_qubits_; ++w) {
        const int sh = num_qubits_ - 1 - w;
        v *= gw[w][((r >> sh) & 1) * 2 + ((c >> sh) & 1)];
      }
      u(r, c) = v;
    }
  }

  // Each expansion block is one 4x4 gate: (Uc kron Ut) * two-qubit gate,
  // contracted against the two wire bits of the working matrix.
  for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
    const Block& b = blocks_[bi];
    const CMatrix uc = single_gate_matrix(b.control_gate, x);
    const CMatrix ut = single_gate_matrix(b.target_gate, x);
    std::array<cplx, 16> g;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
          for (int l = 0; l < 2; ++l) {
            g[(2 * i + k) * 4 + (2 * j + l)] = uc(i, j) * ut(k, l);
          }
        }
      }
    }
    if (b.tq_kind == TwoQubitKind::CNOT) {
      // right-multiplying by CNOT swaps columns 2 and 3
      for (int r = 0; r < 4; ++r) std::swap(g[r * 4 + 2], g[r * 4 + 3]);
    } else {
      const cplx lo = std::polar(1.0, -0.5 * x[b.tq_param_offset]);
      const cplx hi = std::polar(1.0, 0.5 * x[b.tq_param_offset]);
      for (int r = 0; r < 4; ++r) {
        g[r * 4 + 2] *= lo;
        g[r * 4 + 3] *= hi;
      }
    }

    const auto [sc, st] = block_strides_[bi];
    for (const std::size_t base : block_bases_[bi]) {
      cplx* r0 = u.data() + base * n;
      cplx* r1 = u.data() + (base + st) * n;
      cplx* r2 = u.data() + (base + sc) * n;
      cplx* r3 = u.data() + (base + sc + st) * n;
      for (std::size_t c = 0; c < n; ++c) {
        const cplx t0 = r0[c], t1 = r1[c], t2 = r2[c], t3 = r3[c];
        r0[c] = g[0] * t0 + g[1] * t1 + g[2] * t2 + g[3] * t3;
        r1[c] = g[4] * t0 + g[5] * t1 + g[6] * t2 + g[7] * t3;
        r2[c] = g[8] * t0 + g[9] * t1 + g[10] * t2 + g[11] * t3;
        r3[c] = g[12] * t0 + g[13] * t1 + g[14] * t2 + g[15] * t3;
      }
    }
  }
  return u;
}

EvalPlan optimize_eval_order(const CircuitStructure& n) { return EvalPlan(n); }

}  // namespace qsynth
