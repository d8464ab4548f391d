#include "qsynth/matrix.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qsynth {

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool CMatrix::all_finite() const {
  for (const cplx& v : data_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: inner dimensions disagree");
  }
  CMatrix out(a.rows(), b.cols());
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  for (std::size_t i = 0; i < n; ++i) {
    cplx* orow = out.data() + i * m;
    for (std::size_t p = 0; p < k; ++p) {
      const cplx aip = a(i, p);
      if (aip == cplx{}) continue;
      const cplx* brow = b.data() + p * m;
      for (std::size_t j = 0; j < m; ++j) orow[j] += aip * brow[j];
    }
  }
  return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      for (std::size_t j = 0; j < b.rows(); ++j) {
        for (std::size_t l = 0; l < b.cols(); ++l) {
          out(i * b.rows() + j, k * b.cols() + l) = aik * b(j, l);
        }
      }
    }
  }
  return out;
}

CMatrix dagger(const CMatrix& a) {
  CMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  }
  return out;
}

double hs_distance(const CMatrix& u, const CMatrix& target) {
  if (!u.square() || !target.square() || u.rows() != target.rows()) {
    throw std::invalid_argument("hs_distance: need equal square matrices");
  }
  // Tr(u^dag v) = sum_ij conj(u_ij) v_ij, no product needed.
  cplx tr{};
  const std::size_t total = u.rows() * u.cols();
  const cplx* up = u.data();
  const cplx* vp = target.data();
  for (std::size_t i = 0; i < total; ++i) {
    tr += std::conj(up[i]) * vp[i];
  }
  const double d = 1.0 - std::abs(tr) / static_cast<double>(u.rows());
  return d < 0.0 ? 0.0 : d;
}

bool is_unitary(const CMatrix& m, double tol) {
  if (!m.square()) throw std::invalid_argument("is_unitary: matrix not square");
  if (!m.all_finite()) return false;
  const std::size_t n = m.rows();
  // (m^dag m)(i,j) = <col_i, col_j>.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cplx dot{};
      for (std::size_t r = 0; r < n; ++r) dot += std::conj(m(r, i)) * m(r, j);
      if (i == j) dot -= 1.0;
      if (std::abs(dot) > tol) return false;
    }
  }
  return true;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  }
  double worst = 0.0;
  const std::size_t total = a.rows() * a.cols();
  for (std::size_t i = 0; i < total; ++i) {
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  }
  return worst;
}

namespace {

double parse_real(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty numeric field");
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad numeric field '" + s + "'");
  }
  if (pos != s.size()) throw std::invalid_argument("bad numeric field '" + s + "'");
  return v;
}

// Coefficient in front of i: empty and "+" mean 1, "-" means -1.
double parse_imag_coeff(const std::string& s) {
  if (s.empty() || s == "+") return 1.0;
  if (s == "-") return -1.0;
  return parse_real(s);
}

}  // namespace

cplx parse_complex_entry(const std::string& token) {
  if (token.empty()) throw std::invalid_argument("empty matrix entry");
  if (token.back() != 'i') return {parse_real(token), 0.0};
  const std::string body = token.substr(0, token.size() - 1);
  // Split point: the last sign that is neither leading nor an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    const char c = body[k];
    if ((c == '+' || c == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) {
    return {0.0, parse_imag_coeff(body)};
  }
  return {parse_real(body.substr(0, split)), parse_imag_coeff(body.substr(split))};
}

CMatrix read_unitary_text(std::istream& in) {
  std::size_t dim = 0;
  if (!(in >> dim) || dim == 0) {
    throw std::invalid_argument("unitary text: missing or zero dimension");
  }
  CMatrix m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      std::string tok;
      if (!(in >> tok)) {
        throw std::invalid_argument("unitary text: fewer than dim*dim entries");
      }
      m(r, c) = parse_complex_entry(tok);
    }
  }
  if (!m.all_finite()) throw std::invalid_argument("unitary text: non-finite entry");
  return m;
}

CMatrix read_unitary_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open unitary file '" + path + "'");
  return read_unitary_text(in);
}

void write_unitary_text(std::ostream& out, const CMatrix& m) {
  out << m.rows() << "\n";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const cplx v = m(r, c);
      if (c) out << ' ';
      out << format_double(v.real())
          << (std::signbit(v.imag()) ? '-' : '+')
          << format_double(std::abs(v.imag())) << 'i';
    }
    out << "\n";
  }
}

void write_unitary_file(const std::string& path, const CMatrix& m) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write unitary file '" + path + "'");
  write_unitary_text(out, m);
}

std::string format_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace qsynth
