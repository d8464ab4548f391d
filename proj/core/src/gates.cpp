#include "qsynth/gates.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qsynth {

namespace {
constexpr double kPi = std::numbers::pi;
}

CMatrix u3_matrix(const U3Params& p) {
  const double c = std::cos(p.theta * 0.5);
  const double s = std::sin(p.theta * 0.5);
  CMatrix m(2, 2);
  m(0, 0) = c;
  m(0, 1) = -std::polar(s, p.lambda);
  m(1, 0) = std::polar(s, p.phi);
  m(1, 1) = std::polar(c, p.lambda + p.phi);
  return m;
}

CMatrix rz_matrix(double angle) {
  CMatrix m(2, 2);
  m(0, 0) = std::polar(1.0, -0.5 * angle);
  m(1, 1) = std::polar(1.0, 0.5 * angle);
  return m;
}

CMatrix rx_matrix(double angle) {
  const double c = std::cos(angle * 0.5);
  const double s = std::sin(angle * 0.5);
  CMatrix m(2, 2);
  m(0, 0) = c;
  m(0, 1) = cplx(0.0, -s);
  m(1, 0) = cplx(0.0, -s);
  m(1, 1) = c;
  return m;
}

CMatrix cnot_matrix() {
  CMatrix m(4, 4);
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  m(2, 3) = 1.0;
  m(3, 2) = 1.0;
  return m;
}

CMatrix crz_matrix(double angle) {
  CMatrix m(4, 4);
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  m(2, 2) = std::polar(1.0, -0.5 * angle);
  m(3, 3) = std::polar(1.0, 0.5 * angle);
  return m;
}

U3Params u3_params_from(const CMatrix& u) {
  if (u.rows() != 2 || u.cols() != 2) {
    throw std::invalid_argument("u3_params_from: need a 2x2 matrix");
  }
  const cplx a00 = u(0, 0), a01 = u(0, 1), a10 = u(1, 0), a11 = u(1, 1);
  const double c = std::abs(a00);
  const double s = std::abs(a10);
  U3Params p;
  p.theta = 2.0 * std::atan2(s, c);
  const double alpha = std::arg(a00);
  p.phi = std::arg(a10) - alpha;
  // lambda comes from whichever entry has the larger magnitude; phase noise
  // picked up from the small entries is damped by those same magnitudes on
  // reconstruction.
  if (c >= s) {
    p.lambda = (std::arg(a11) - alpha) - p.phi;
  } else {
    p.lambda = std::arg(-a01) - alpha;
  }
  return p;
}

std::vector<NativeRotation> decompose_u3(const U3Params& p) {
  using Axis = NativeRotation::Axis;
  return {
      {Axis::Z, p.phi + kPi},
      {Axis::X, kPi / 2},
      {Axis::Z, p.theta + kPi},
      {Axis::X, kPi / 2},
      {Axis::Z, p.lambda},
  };
}

CMatrix native_product(const std::vector<NativeRotation>& seq) {
  CMatrix out = CMatrix::identity(2);
  for (const NativeRotation& r : seq) {
    const CMatrix g =
        r.axis == NativeRotation::Axis::Z ? rz_matrix(r.angle) : rx_matrix(r.angle);
    out = matmul(out, g);
  }
  return out;
}

CMatrix embed_gate(const CMatrix& gate, const std::vector<int>& qubits,
                   int total_qubits) {
  if (total_qubits < 1) throw std::invalid_argument("embed_gate: empty register");
  if (qubits.empty() || qubits.size() > 2) {
    throw std::invalid_argument("embed_gate: supports 1 or 2 wires");
  }
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (qubits[i] < 0 || qubits[i] >= total_qubits) {
      throw std::invalid_argument("embed_gate: wire index out of range");
    }
    for (std::size_t j = i + 1; j < qubits.size(); ++j) {
      if (qubits[i] == qubits[j]) {
        throw std::invalid_argument("embed_gate: duplicate wire index");
      }
    }
  }
  const std::size_t local_dim = std::size_t{1} << qubits.size();
  if (gate.rows() != local_dim || gate.cols() != local_dim) {
    throw std::invalid_argument("embed_gate: gate dimension does not match wires");
  }

  const std::size_t n = std::size_t{1} << total_qubits;
  // qubit q occupies bit (total-1-q): qubit 0 is the most significant.
  std::vector<int> shift(qubits.size());
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    shift[i] = total_qubits - 1 - qubits[i];
  }
  std::size_t wipe_mask = 0;
  for (int sh : shift) wipe_mask |= std::size_t{1} << sh;

  CMatrix out(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t lc = 0;
    for (std::size_t i = 0; i < shift.size(); ++i) {
      lc = (lc << 1) | ((col >> shift[i]) & 1);
    }
    const std::size_t rest = col & ~wipe_mask;
    for (std::size_t lr = 0; lr < local_dim; ++lr) {
      std::size_t row = rest;
      for (std::size_t i = 0; i < shift.size(); ++i) {
        const std::size_t bit = (lr >> (shift.size() - 1 - i)) & 1;
        row |= bit << shift[i];
      }
      out(row, col) = gate(lr, lc);
    }
  }
  return out;
}

}  // namespace qsynth
