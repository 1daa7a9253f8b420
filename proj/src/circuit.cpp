#include "hamforge/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hamforge {

using cd = std::complex<double>;

const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::Sdg: return "Sdg";
    case GateKind::X: return "X";
    case GateKind::Z: return "Z";
    case GateKind::CNOT: return "CNOT";
    case GateKind::Rz: return "Rz";
    case GateKind::CRz: return "CRz";
    case GateKind::Toffoli: return "Toffoli";
    case GateKind::MCX: return "MCX";
    case GateKind::MCRz: return "MCRz";
  }
  return "?";
}

Gate Gate::mcx(std::vector<int> controls, int t) {
  Gate g{GateKind::MCX, std::move(controls)};
  g.qubits.push_back(t);
  return g;
}

Gate Gate::mcrz(std::vector<int> controls, int t, double a) {
  Gate g{GateKind::MCRz, std::move(controls), a};
  g.qubits.push_back(t);
  return g;
}

CostReport& CostReport::operator+=(const CostReport& o) {
  rotations += o.rotations;
  toffoli_pairs += o.toffoli_pairs;
  cnots += o.cnots;
  single_qubit_cliffords += o.single_qubit_cliffords;
  return *this;
}

void Circuit::push(Gate g) {
  std::set<int> seen;
  for (int q : g.qubits) {
    if (q < 0 || q >= width())
      throw std::logic_error("gate qubit out of range");
    if (!seen.insert(q).second)
      throw std::logic_error("gate qubits must be distinct");
  }
  gates.push_back(std::move(g));
}

namespace {

// True when all controls of g (qubits[0..k-1]) fire for basis index idx.
bool controls_fire(const Gate& g, int w, long idx) {
  int k = g.num_controls();
  for (int i = 0; i < k; ++i) {
    int bit = (idx >> (w - 1 - g.qubits[i])) & 1;
    int want = ((g.negated >> i) & 1u) ? 0 : 1;
    if (bit != want) return false;
  }
  return true;
}

void apply_gate(Eigen::MatrixXcd& u, const Gate& g, int w) {
  const long dim = 1L << w;
  const cd i1(0, 1);
  switch (g.kind) {
    case GateKind::H: {
      long tb = 1L << (w - 1 - g.qubits[0]);
      double r = 1.0 / std::sqrt(2.0);
      for (long a = 0; a < dim; ++a) {
        if (a & tb) continue;
        Eigen::RowVectorXcd r0 = u.row(a), r1 = u.row(a | tb);
        u.row(a) = r * (r0 + r1);
        u.row(a | tb) = r * (r0 - r1);
      }
      break;
    }
    case GateKind::S:
    case GateKind::Sdg:
    case GateKind::Z: {
      long tb = 1L << (w - 1 - g.qubits[0]);
      cd f = g.kind == GateKind::S ? i1 : (g.kind == GateKind::Sdg ? -i1 : cd(-1));
      for (long a = 0; a < dim; ++a)
        if (a & tb) u.row(a) *= f;
      break;
    }
    case GateKind::X: {
      long tb = 1L << (w - 1 - g.qubits[0]);
      for (long a = 0; a < dim; ++a)
        if (!(a & tb)) u.row(a).swap(u.row(a | tb));
      break;
    }
    case GateKind::Rz: {
      long tb = 1L << (w - 1 - g.qubits[0]);
      cd e0 = std::exp(-i1 * (g.angle / 2)), e1 = std::exp(i1 * (g.angle / 2));
      for (long a = 0; a < dim; ++a) u.row(a) *= (a & tb) ? e1 : e0;
      break;
    }
    case GateKind::CNOT:
    case GateKind::Toffoli:
    case GateKind::MCX: {
      long tb = 1L << (w - 1 - g.target());
      for (long a = 0; a < dim; ++a)
        if (!(a & tb) && controls_fire(g, w, a)) u.row(a).swap(u.row(a | tb));
      break;
    }
    case GateKind::CRz:
    case GateKind::MCRz: {
      long tb = 1L << (w - 1 - g.target());
      cd e0 = std::exp(-i1 * (g.angle / 2)), e1 = std::exp(i1 * (g.angle / 2));
      for (long a = 0; a < dim; ++a)
        if (controls_fire(g, w, a)) u.row(a) *= (a & tb) ? e1 : e0;
      break;
    }
  }
}

}  // namespace

Eigen::MatrixXcd Circuit::unitary() const {
  int w = width();
  if (w > 12) throw std::logic_error("unitary() limited to 12 qubits");
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(1L << w, 1L << w);
  for (const Gate& g : gates) apply_gate(u, g, w);
  return u;
}

Eigen::MatrixXcd Circuit::system_unitary(double tol) const {
  Eigen::MatrixXcd u = unitary();
  long ds = 1L << n_system, da = 1L << n_ancilla;
  Eigen::MatrixXcd m(ds, ds);
  for (long j = 0; j < ds; ++j) {
    double leak = 0;
    for (long i = 0; i < ds; ++i) {
      m(i, j) = u(i * da, j * da);
      for (long a = 1; a < da; ++a) leak += std::norm(u(i * da + a, j * da));
    }
    if (leak > tol * tol)
      throw std::logic_error("ancilla not restored to |0> (leakage " +
                             std::to_string(std::sqrt(leak)) + ")");
  }
  return m;
}

CostReport Circuit::cost() const {
  CostReport c;
  std::map<int, int> pair_count;
  for (const Gate& g : gates) {
    switch (g.kind) {
      case GateKind::H:
      case GateKind::S:
      case GateKind::Sdg:
      case GateKind::X:
      case GateKind::Z:
        c.single_qubit_cliffords++;
        break;
      case GateKind::CNOT:
        c.cnots++;
        break;
      case GateKind::Rz:
      case GateKind::CRz:
        c.rotations++;
        break;
      case GateKind::MCRz:
        c.rotations++;
        c.toffoli_pairs += std::max(0, g.num_controls() - 1);
        break;
      case GateKind::MCX:
        c.toffoli_pairs += std::max(0, g.num_controls() - 1);
        c.cnots++;
        break;
      case GateKind::Toffoli:
        if (g.pair_id < 0)
          throw std::logic_error("explicit Toffoli without pair id");
        pair_count[g.pair_id]++;
        break;
    }
  }
  for (auto& [id, cnt] : pair_count) {
    if (cnt != 2)
      throw std::logic_error("Toffoli pair id " + std::to_string(id) +
                             " appears " + std::to_string(cnt) + " times");
    c.toffoli_pairs++;
  }
  return c;
}

std::string Circuit::dump() const {
  std::ostringstream out;
  out << "circuit n_system=" << n_system << " n_ancilla=" << n_ancilla << '\n';
  for (const Gate& g : gates) {
    out << "  " << gate_name(g.kind);
    if (g.is_rotation()) out << '(' << g.angle << ')';
    for (size_t i = 0; i < g.qubits.size(); ++i) {
      out << ' ';
      if (i + 1 < g.qubits.size() && ((g.negated >> i) & 1u)) out << '!';
      out << 'q' << g.qubits[i];
    }
    if (g.pair_id >= 0) out << " pair=" << g.pair_id;
    out << '\n';
  }
  return out.str();
}

Circuit Circuit::dagger() const {
  Circuit c{n_system, n_ancilla};
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    Gate g = *it;
    if (g.kind == GateKind::S) g.kind = GateKind::Sdg;
    else if (g.kind == GateKind::Sdg) g.kind = GateKind::S;
    else if (g.is_rotation()) g.angle = -g.angle;
    c.gates.push_back(std::move(g));
  }
  return c;
}

Circuit concat(const Circuit& a, const Circuit& b) {
  if (a.n_system != b.n_system)
    throw std::logic_error("concat: system width mismatch");
  Circuit c{a.n_system, std::max(a.n_ancilla, b.n_ancilla)};
  c.gates = a.gates;
  int max_id = -1;
  for (const Gate& g : a.gates) max_id = std::max(max_id, g.pair_id);
  for (Gate g : b.gates) {
    if (g.pair_id >= 0) g.pair_id += max_id + 1;
    c.gates.push_back(std::move(g));
  }
  return c;
}

Circuit decompose_mcx(const Gate& g, int n_system) {
  if (g.kind != GateKind::MCX) throw std::logic_error("not an MCX gate");
  int k = g.num_controls();
  if (k < 1) throw std::logic_error("decompose_mcx needs >= 1 control");
  Circuit c{n_system, 0};
  if (k == 1) {
    if (g.negated & 1u) c.push(Gate::x(g.qubits[0]));
    c.push(Gate::cnot(g.qubits[0], g.target()));
    if (g.negated & 1u) c.push(Gate::x(g.qubits[0]));
    return c;
  }
  // X-conjugate negated controls so the Toffoli chain uses plain controls.
  auto polarity = [&](bool open) {
    for (int i = 0; i < k; ++i)
      if ((g.negated >> i) & 1u) c.push(Gate::x(g.qubits[i]));
    (void)open;
  };
  polarity(true);
  std::vector<int> anc(k - 1);
  for (int i = 0; i + 1 < k; ++i) anc[i] = c.add_ancilla();
  std::vector<Gate> compute;
  compute.push_back(Gate::toffoli(g.qubits[0], g.qubits[1], anc[0], 0));
  for (int i = 2; i < k; ++i)
    compute.push_back(Gate::toffoli(anc[i - 2], g.qubits[i], anc[i - 1], i - 1));
  for (const Gate& t : compute) c.push(t);
  c.push(Gate::cnot(anc[k - 2], g.target()));
  for (auto it = compute.rbegin(); it != compute.rend(); ++it) c.push(*it);
  polarity(false);
  return c;
}

}  // namespace hamforge
