#include "qsynth/qasm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qsynth {

namespace {

constexpr double kPi = std::numbers::pi;

[[noreturn]] void fail(int line, const std::string& msg) {
  throw std::runtime_error("line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Full-consume strtod; returns false on leftover characters.
bool parse_number(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

// Numeric literal or a pi form: pi, -pi, 2*pi, 0.5*pi, pi/2, -3*pi/4.
double parse_angle(const std::string& raw, int line) {
  const std::string s = trim(raw);
  if (s.empty()) fail(line, "empty angle");
  const std::size_t pos = s.find("pi");
  if (pos == std::string::npos) {
    double v;
    if (!parse_number(s, v)) fail(line, "bad angle literal '" + s + "'");
    return v;
  }
  std::string pre = trim(s.substr(0, pos));
  std::string post = trim(s.substr(pos + 2));
  double coef = 1.0;
  if (pre == "-") {
    coef = -1.0;
  } else if (!pre.empty() && pre != "+") {
    if (!pre.empty() && pre.back() == '*') pre = trim(pre.substr(0, pre.size() - 1));
    if (!parse_number(pre, coef)) {
      fail(line, "bad angle literal '" + s + "'");
    }
  }
  double denom = 1.0;
  if (!post.empty()) {
    if (post.front() != '/' || !parse_number(post.substr(1), denom) ||
        denom == 0.0) {
      fail(line, "bad angle literal '" + s + "'");
    }
  }
  return coef * kPi / denom;
}

// Splits "q[3]" into register name and index.
void parse_operand(const std::string& raw, int line, int num_qubits,
                   int& index) {
  const std::string s = trim(raw);
  const std::size_t lb = s.find('[');
  if (lb == std::string::npos || s.back() != ']') {
    fail(line, "bad operand '" + s + "'");
  }
  if (trim(s.substr(0, lb)) != "q") {
    fail(line, "unknown register in operand '" + s + "'");
  }
  double v;
  if (!parse_number(s.substr(lb + 1, s.size() - lb - 2), v) ||
      v != std::floor(v) || v < 0.0) {
    fail(line, "bad qubit index in operand '" + s + "'");
  }
  index = static_cast<int>(v);
  if (index >= num_qubits) {
    fail(line, "qubit index " + std::to_string(index) +
                   " out of range for q[" + std::to_string(num_qubits) + "]");
  }
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = s.find(',', start);
    if (comma == std::string::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, comma - start));
    start = comma + 1;
  }
}

const char* kind_name(Instruction::Kind k) {
  switch (k) {
    case Instruction::Kind::U3:
      return "u3";
    case Instruction::Kind::RZ:
      return "rz";
    case Instruction::Kind::RX:
      return "rx";
    case Instruction::Kind::CX:
      return "cx";
    case Instruction::Kind::CRZ:
      return "crz";
  }
  return "?";
}

std::string angle_literal(double v) {
  if (v == kPi / 2) return "pi/2";
  return format_double(v);
}

}  // namespace

long EmittedCircuit::count(Instruction::Kind kind) const {
  return std::count_if(
      instructions.begin(), instructions.end(),
      [kind](const Instruction& i) { return i.kind == kind; });
}

long EmittedCircuit::two_qubit_count() const {
  return count(Instruction::Kind::CX) + count(Instruction::Kind::CRZ);
}

EmittedCircuit emit_circuit(const CircuitStructure& structure,
                            ParamView params, bool native) {
  if (static_cast<int>(params.size()) != structure.param_count) {
    throw std::invalid_argument("emit_circuit: parameter count mismatch");
  }
  EmittedCircuit c;
  c.num_qubits = structure.num_qubits;
  c.header = "qreg q[" + std::to_string(structure.num_qubits) + "];";
  for (const Step& s : structure.steps) {
    if (s.kind == Step::Kind::TwoQubit) {
      Instruction ins;
      ins.kind = s.tq_kind == TwoQubitKind::CNOT ? Instruction::Kind::CX
                                                 : Instruction::Kind::CRZ;
      ins.q0 = s.control;
      ins.q1 = s.target;
      if (s.tq_kind == TwoQubitKind::CRZ) {
        ins.angles = {params[s.tq_param_offset]};
      }
      c.instructions.push_back(std::move(ins));
      continue;
    }
    for (const SingleGate& g : s.gates) {
      const U3Params p{params[g.param_offset], params[g.param_offset + 1],
                       g.arity == 3 ? params[g.param_offset + 2] : 0.0};
      if (!native) {
        c.instructions.push_back(
            {Instruction::Kind::U3, g.wire, -1, {p.theta, p.phi, p.lambda}});
        continue;
      }
      const std::vector<NativeRotation> seq = decompose_u3(p);
      // decompose_u3 is in matrix-product order; instructions run in time
      // order, so walk it back to front.
      for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
        c.instructions.push_back({it->axis == NativeRotation::Axis::Z
                                      ? Instruction::Kind::RZ
                                      : Instruction::Kind::RX,
                                  g.wire,
                                  -1,
                                  {it->angle}});
      }
    }
  }
  return c;
}

void write_qasm(std::ostream& out, const EmittedCircuit& circuit) {
  out << "OPENQASM 2.0;\n";
  out << "include \"qelib1.inc\";\n";
  out << circuit.header << '\n';
  for (const Instruction& ins : circuit.instructions) {
    out << kind_name(ins.kind);
    if (!ins.angles.empty()) {
      out << '(';
      for (std::size_t i = 0; i < ins.angles.size(); ++i) {
        if (i) out << ',';
        out << angle_literal(ins.angles[i]);
      }
      out << ')';
    }
    out << " q[" << ins.q0 << ']';
    if (ins.q1 >= 0) out << ",q[" << ins.q1 << ']';
    out << ";\n";
  }
}

std::string to_qasm(const EmittedCircuit& circuit) {
  std::ostringstream out;
  write_qasm(out, circuit);
  return out.str();
}

EmittedCircuit parse_qasm(std::istream& in) {
  EmittedCircuit c;
  bool have_qreg = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t comment = line.find("//");
    if (comment != std::string::npos) line = line.substr(0, comment);
    std::string body = trim(line);
    if (body.empty()) continue;
    if (body.back() != ';') fail(lineno, "missing ';'");
    body = trim(body.substr(0, body.size() - 1));
    if (body.find(';') != std::string::npos) {
      fail(lineno, "multiple statements on one line");
    }
    if (body.rfind("OPENQASM", 0) == 0 || body.rfind("include", 0) == 0) {
      continue;
    }
    if (body.rfind("qreg", 0) == 0) {
      if (have_qreg) fail(lineno, "duplicate qreg declaration");
      const std::string decl = trim(body.substr(4));
      const std::size_t lb = decl.find('[');
      if (lb == std::string::npos || decl.back() != ']' ||
          trim(decl.substr(0, lb)) != "q") {
        fail(lineno, "bad qreg declaration '" + decl + "'");
      }
      double v;
      if (!parse_number(decl.substr(lb + 1, decl.size() - lb - 2), v) ||
          v != std::floor(v) || v < 1.0) {
        fail(lineno, "bad register size in '" + decl + "'");
      }
      c.num_qubits = static_cast<int>(v);
      c.header = "qreg q[" + std::to_string(c.num_qubits) + "];";
      have_qreg = true;
      continue;
    }

    std::size_t name_end = 0;
    while (name_end < body.size() &&
           (std::isalnum(static_cast<unsigned char>(body[name_end])) ||
            body[name_end] == '_')) {
      ++name_end;
    }
    const std::string name = body.substr(0, name_end);
    std::string rest = trim(body.substr(name_end));

    Instruction ins;
    std::size_t want_angles = 0, want_operands = 1;
    if (name == "u3") {
      ins.kind = Instruction::Kind::U3;
      want_angles = 3;
    } else if (name == "rz") {
      ins.kind = Instruction::Kind::RZ;
      want_angles = 1;
    } else if (name == "rx") {
      ins.kind = Instruction::Kind::RX;
      want_angles = 1;
    } else if (name == "cx") {
      ins.kind = Instruction::Kind::CX;
      want_operands = 2;
    } else if (name == "crz") {
      ins.kind = Instruction::Kind::CRZ;
      want_angles = 1;
      want_operands = 2;
    } else {
      fail(lineno, "unknown instruction '" + name + "'");
    }
    if (!have_qreg) fail(lineno, "instruction before qreg declaration");

    if (!rest.empty() && rest.front() == '(') {
      const std::size_t close = rest.find(')');
      if (close == std::string::npos) fail(lineno, "unterminated '('");
      for (const std::string& part :
           split_commas(rest.substr(1, close - 1))) {
        ins.angles.push_back(parse_angle(part, lineno));
      }
      rest = trim(rest.substr(close + 1));
    }
    if (ins.angles.size() != want_angles) {
      fail(lineno, name + " expects " + std::to_string(want_angles) +
                       " angle(s), got " + std::to_string(ins.angles.size()));
    }

    const std::vector<std::string> operands = split_commas(rest);
    if (operands.size() != want_operands) {
      fail(lineno, name + " expects " + std::to_string(want_operands) +
                       " operand(s)");
    }
    parse_operand(operands[0], lineno, c.num_qubits, ins.q0);
    if (want_operands == 2) {
      parse_operand(operands[1], lineno, c.num_qubits, ins.q1);
      if (ins.q0 == ins.q1) fail(lineno, "duplicate operand qubit");
    }
    c.instructions.push_back(std::move(ins));
  }
  if (!have_qreg) {
    throw std::runtime_error("line 1: no qreg declaration found");
  }
  return c;
}

EmittedCircuit parse_qasm_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open circuit file: " + path);
  return parse_qasm(in);
}

Unitary circuit_unitary(const EmittedCircuit& circuit) {
  const std::size_t dim = std::size_t{1} << circuit.num_qubits;
  Unitary u = CMatrix::identity(dim);
  for (const Instruction& ins : circuit.instructions) {
    CMatrix g;
    std::vector<int> wires;
    switch (ins.kind) {
      case Instruction::Kind::U3:
        g = u3_matrix({ins.angles[0], ins.angles[1], ins.angles[2]});
        wires = {ins.q0};
        break;
      case Instruction::Kind::RZ:
        g = rz_matrix(ins.angles[0]);
        wires = {ins.q0};
        break;
      case Instruction::Kind::RX:
        g = rx_matrix(ins.angles[0]);
        wires = {ins.q0};
        break;
      case Instruction::Kind::CX:
        g = cnot_matrix();
        wires = {ins.q0, ins.q1};
        break;
      case Instruction::Kind::CRZ:
        g = crz_matrix(ins.angles[0]);
        wires = {ins.q0, ins.q1};
        break;
    }
    u = matmul(embed_gate(g, wires, circuit.num_qubits), u);
  }
  return u;
}

}  // namespace qsynth
