#pragma once

// Dense complex matrices and the distance metric everything else is built on.
// Matrices at play are at most 16x16 (4 qubits), so storage is a flat
// row-major vector and no attempt is made at blocking or sparsity.

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace qsynth {

using cplx = std::complex<double>;

class CMatrix {
public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static CMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  cplx* data() { return data_.data(); }
  const cplx* data() const { return data_.data(); }

  bool all_finite() const;

  bool operator==(const CMatrix&) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

// A unitary is carried as a plain CMatrix; callers that require the
// invariant check it with is_unitary at their chosen tolerance.
using Unitary = CMatrix;

// Standard product. Throws std::invalid_argument on inner-dimension mismatch.
CMatrix matmul(const CMatrix& a, const CMatrix& b);

// Kronecker product: out[i*p + j, k*q + l] = a(i,k) * b(j,l) for b of shape p x q.
CMatrix kron(const CMatrix& a, const CMatrix& b);

// Conjugate transpose.
CMatrix dagger(const CMatrix& a);

// Hilbert-Schmidt distance 1 - |Tr(u^dag target)| / N, zero iff the two agree
// up to global phase. The magnitude on the trace is deliberate: a circuit that
// matches the target up to phase is a valid solution. Throws on shape mismatch.
double hs_distance(const CMatrix& u, const CMatrix& target);

// True iff ||m^dag m - I||_max <= tol. Throws std::invalid_argument if m is
// not square.
bool is_unitary(const CMatrix& m, double tol);

// max_ij |a(i,j) - b(i,j)|; infinity on shape mismatch is avoided by throwing.
double max_abs_diff(const CMatrix& a, const CMatrix& b);

// Text format for unitaries: first line is the dimension, then dim lines of
// dim whitespace-separated entries written like 0.7071067811865476+0i.
// Accepted entry forms: a+bi, a-bi, bare real, bare imaginary (e.g. -2i),
// any part in scientific notation.
cplx parse_complex_entry(const std::string& token);
CMatrix read_unitary_text(std::istream& in);
CMatrix read_unitary_file(const std::string& path);
void write_unitary_text(std::ostream& out, const CMatrix& m);
void write_unitary_file(const std::string& path, const CMatrix& m);

// Shortest decimal form that round-trips a double (up to 17 significant
// digits); used by every emitter that must survive re-parsing.
std::string format_double(double v);

}  // namespace qsynth
