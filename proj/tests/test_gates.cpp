#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qsynth/gates.hpp"
#include "qsynth/matrix.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

using namespace qsynth;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uniform_real_distribution<double> angle_dist(-2.0 * kPi, 2.0 * kPi);

// Basis action of a 2-qubit permutation-with-phase matrix applied through
// embed_gate, checked column by column against a hand computation.
int bit_of(std::size_t index, int wire, int total) {
  return static_cast<int>(index >> (total - 1 - wire)) & 1;
}

std::size_t with_bit(std::size_t index, int wire, int total, int value) {
  const std::size_t mask = std::size_t{1} << (total - 1 - wire);
  return value ? (index | mask) : (index & ~mask);
}

}  // namespace

TEST_CASE("u3_matrix entries follow the closed form") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const U3Params p{angle_dist(rng), angle_dist(rng), angle_dist(rng)};
    const CMatrix u = u3_matrix(p);
    REQUIRE(u.rows() == 2);
    const double c = std::cos(p.theta / 2), s = std::sin(p.theta / 2);
    CHECK(std::abs(u(0, 0) - cplx(c, 0)) <= 1e-15);
    CHECK(std::abs(u(0, 1) + std::polar(s, p.lambda)) <= 1e-15);
    CHECK(std::abs(u(1, 0) - std::polar(s, p.phi)) <= 1e-15);
    CHECK(std::abs(u(1, 1) - std::polar(c, p.lambda + p.phi)) <= 1e-15);
    CHECK(is_unitary(u, 1e-12));
  }
}

TEST_CASE("u3 special values") {
  CHECK(max_abs_diff(u3_matrix({}), CMatrix::identity(2)) == 0.0);
  // theta = pi, phi = 0, lambda = pi is the Pauli X up to global phase.
  const CMatrix x = u3_matrix({kPi, 0.0, kPi});
  CMatrix pauli_x(2, 2);
  pauli_x(0, 1) = 1.0;
  pauli_x(1, 0) = 1.0;
  CHECK(hs_distance(x, pauli_x) <= 1e-15);
}

TEST_CASE("fixed gates have the documented matrices") {
  const CMatrix cx = cnot_matrix();
  // Control on the more significant qubit: |10> -> |11>, |11> -> |10|.
  CHECK(cx(2, 3) == cplx(1, 0));
  CHECK(cx(3, 2) == cplx(1, 0));
  CHECK(cx(0, 0) == cplx(1, 0));
  CHECK(cx(1, 1) == cplx(1, 0));
  CHECK(cx(2, 2) == cplx(0, 0));
  CHECK(max_abs_diff(matmul(cx, cx), CMatrix::identity(4)) == 0.0);

  const double a = 0.7;
  const CMatrix rz = rz_matrix(a);
  CHECK(std::abs(rz(0, 0) - std::polar(1.0, -a / 2)) <= 1e-16);
  CHECK(std::abs(rz(1, 1) - std::polar(1.0, a / 2)) <= 1e-16);
  CHECK(rz(0, 1) == cplx(0, 0));

  const CMatrix crz = crz_matrix(a);
  CHECK(crz(0, 0) == cplx(1, 0));
  CHECK(crz(1, 1) == cplx(1, 0));
  CHECK(std::abs(crz(2, 2) - std::polar(1.0, -a / 2)) <= 1e-16);
  CHECK(std::abs(crz(3, 3) - std::polar(1.0, a / 2)) <= 1e-16);

  // rx(pi/2) has the standard 1/sqrt(2) [[1, -i], [-i, 1]] form.
  const CMatrix rx = rx_matrix(kPi / 2);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(rx(0, 0) - cplx(inv_sqrt2, 0)) <= 1e-15);
  CHECK(std::abs(rx(0, 1) - cplx(0, -inv_sqrt2)) <= 1e-15);
  CHECK(std::abs(rx(1, 0) - cplx(0, -inv_sqrt2)) <= 1e-15);
}

TEST_CASE("u3_params_from inverts u3_matrix, degenerate angles included") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 300; ++trial) {
    U3Params p{angle_dist(rng), angle_dist(rng), angle_dist(rng)};
    switch (trial % 5) {
      case 1: p.theta = 0.0; break;          // only lambda+phi observable
      case 2: p.theta = kPi; break;          // cos branch vanishes
      case 3: p.theta = 2.0 * kPi; break;
      case 4: p.theta = 1e-9; break;         // near-degenerate
      default: break;
    }
    const CMatrix u = u3_matrix(p);
    const U3Params q = u3_params_from(u);
    CHECK(hs_distance(u3_matrix(q), u) <= 1e-12);
  }
  // Arbitrary global phase on the input must not break the recovery.
  const CMatrix u = u3_matrix({1.1, -0.4, 2.2});
  CMatrix v = u;
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 2; ++c) v(r, c) *= std::polar(1.0, 0.83);
  }
  CHECK(hs_distance(u3_matrix(u3_params_from(v)), u) <= 1e-12);
}

TEST_CASE("decompose_u3 reproduces the gate through two fixed X pulses") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 1000; ++trial) {
    const U3Params p{angle_dist(rng), angle_dist(rng), angle_dist(rng)};
    const auto seq = decompose_u3(p);
    REQUIRE(seq.size() == 5);
    CHECK(seq[0].axis == NativeRotation::Axis::Z);
    CHECK(seq[1].axis == NativeRotation::Axis::X);
    CHECK(seq[2].axis == NativeRotation::Axis::Z);
    CHECK(seq[3].axis == NativeRotation::Axis::X);
    CHECK(seq[4].axis == NativeRotation::Axis::Z);
    CHECK(seq[1].angle == kPi / 2);
    CHECK(seq[3].angle == kPi / 2);
    CHECK(hs_distance(native_product(seq), u3_matrix(p)) <= 1e-10);
  }
}

TEST_CASE("trailing diagonal commutes through the control line") {
  // The two identities behind dropping the control gate's lambda slot:
  // U3(t, p, l) = U3(t, p, 0) diag(1, e^{il}), and a diagonal on the control
  // wire commutes through CNOT and CRZ.
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const U3Params p{angle_dist(rng), angle_dist(rng), angle_dist(rng)};
    CMatrix d = CMatrix::identity(2);
    d(1, 1) = std::polar(1.0, p.lambda);
    CHECK(max_abs_diff(u3_matrix(p),
                       matmul(u3_matrix({p.theta, p.phi, 0.0}), d)) <= 1e-15);

    const CMatrix dc = kron(d, CMatrix::identity(2));
    CHECK(max_abs_diff(matmul(dc, cnot_matrix()),
                       matmul(cnot_matrix(), dc)) == 0.0);
    const CMatrix crz = crz_matrix(angle_dist(rng));
    CHECK(max_abs_diff(matmul(dc, crz), matmul(crz, dc)) == 0.0);
  }
}

TEST_CASE("embed_gate on one wire matches the kron layout") {
  std::mt19937_64 rng(47);
  const CMatrix g = u3_matrix({angle_dist(rng), angle_dist(rng),
                               angle_dist(rng)});
  const CMatrix i2 = CMatrix::identity(2);
  CHECK(max_abs_diff(embed_gate(g, {0}, 3), kron(kron(g, i2), i2)) == 0.0);
  CHECK(max_abs_diff(embed_gate(g, {1}, 3), kron(kron(i2, g), i2)) == 0.0);
  CHECK(max_abs_diff(embed_gate(g, {2}, 3), kron(kron(i2, i2), g)) == 0.0);
  CHECK(max_abs_diff(embed_gate(g, {0}, 1), g) == 0.0);
}

TEST_CASE("embed_gate on adjacent wire pairs matches the kron layout") {
  std::mt19937_64 rng(53);
  const CMatrix g = matmul(cnot_matrix(),
                           kron(u3_matrix({angle_dist(rng), 0.3, -0.2}),
                                u3_matrix({0.9, angle_dist(rng), 0.5})));
  const CMatrix i2 = CMatrix::identity(2);
  CHECK(max_abs_diff(embed_gate(g, {0, 1}, 3), kron(g, i2)) == 0.0);
  CHECK(max_abs_diff(embed_gate(g, {1, 2}, 3), kron(i2, g)) == 0.0);
  CHECK(max_abs_diff(embed_gate(g, {0, 1}, 2), g) == 0.0);
}

TEST_CASE("embed_gate basis action for arbitrary wire pairs") {
  // Column b of the embedding must equal the superposition obtained by
  // applying the 2x2x2x2 gate tensor to the two addressed bits of b.
  std::mt19937_64 rng(59);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix g(4, 4);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) g(r, c) = cplx(gauss(rng), gauss(rng));
  }
  const int total = 4;
  const std::size_t dim = 16;
  for (const std::vector<int>& wires :
       {std::vector<int>{1, 3}, {3, 1}, {2, 0}, {0, 3}, {2, 1}}) {
    const CMatrix e = embed_gate(g, wires, total);
    for (std::size_t b = 0; b < dim; ++b) {
      const int in_hi = bit_of(b, wires[0], total);
      const int in_lo = bit_of(b, wires[1], total);
      const std::size_t in_col = static_cast<std::size_t>(in_hi * 2 + in_lo);
      for (int out_hi = 0; out_hi < 2; ++out_hi) {
        for (int out_lo = 0; out_lo < 2; ++out_lo) {
          std::size_t row = with_bit(b, wires[0], total, out_hi);
          row = with_bit(row, wires[1], total, out_lo);
          const std::size_t out_row =
              static_cast<std::size_t>(out_hi * 2 + out_lo);
          CHECK(std::abs(e(row, b) - g(out_row, in_col)) == 0.0);
        }
      }
      // Rows whose untouched bits differ from b's must be zero.
      for (std::size_t r = 0; r < dim; ++r) {
        std::size_t masked_r = r, masked_b = b;
        for (int w : wires) {
          masked_r = with_bit(masked_r, w, total, 0);
          masked_b = with_bit(masked_b, w, total, 0);
        }
        if (masked_r != masked_b) CHECK(e(r, b) == cplx(0, 0));
      }
    }
  }
}

TEST_CASE("reversed CNOT equals the hadamard-conjugated forward CNOT") {
  CMatrix h(2, 2);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  h(0, 0) = inv_sqrt2;
  h(0, 1) = inv_sqrt2;
  h(1, 0) = inv_sqrt2;
  h(1, 1) = -inv_sqrt2;
  const CMatrix hh = kron(h, h);
  const CMatrix conj = matmul(hh, matmul(cnot_matrix(), hh));
  CHECK(max_abs_diff(embed_gate(cnot_matrix(), {1, 0}, 2), conj) <= 1e-15);
}

TEST_CASE("embed_gate rejects malformed wire lists") {
  const CMatrix g1 = CMatrix::identity(2), g2 = CMatrix::identity(4);
  CHECK_THROWS_AS(embed_gate(g1, {3}, 3), std::invalid_argument);
  CHECK_THROWS_AS(embed_gate(g1, {-1}, 3), std::invalid_argument);
  CHECK_THROWS_AS(embed_gate(g2, {0, 0}, 3), std::invalid_argument);
  CHECK_THROWS_AS(embed_gate(g2, {0}, 3), std::invalid_argument);
  CHECK_THROWS_AS(embed_gate(g1, {0, 1}, 3), std::invalid_argument);
  CHECK_THROWS_AS(embed_gate(g2, {0, 1, 2}, 3), std::invalid_argument);
}

TEST_CASE("gate set arities") {
  CHECK(GateSet::cnot().expansion_param_arity() == 5);
  CHECK(GateSet::cnot(false).expansion_param_arity() == 6);
  CHECK(GateSet::crz().expansion_param_arity() == 6);
  CHECK(GateSet::crz(false).expansion_param_arity() == 7);
  CHECK(GateSet::cnot().orientation_sensitive());
  CHECK_FALSE(GateSet::crz().orientation_sensitive());
}
