#include "hamforge/tableau.hpp"

#include <stdexcept>

namespace hamforge {

namespace {

PauliString make(int n, std::uint32_t x, std::uint32_t z, int k) {
  return PauliString{n, x, z, ((k % 4) + 4) % 4};
}

// Image of the generator X_q (which == false) or Z_q (which == true) under
// conjugation by gate g on an n-qubit register.
PauliString generator_image(const Gate& g, int n, int q, bool is_z) {
  std::uint32_t bq = 1u << q;
  switch (g.kind) {
    case GateKind::H:
      if (q == g.qubits[0]) return is_z ? make(n, bq, 0, 0) : make(n, 0, bq, 0);
      break;
    case GateKind::S:
      if (q == g.qubits[0] && !is_z) return make(n, bq, bq, 1);  // X -> Y
      break;
    case GateKind::Sdg:
      if (q == g.qubits[0] && !is_z) return make(n, bq, bq, 3);  // X -> -Y
      break;
    case GateKind::X:
      if (q == g.qubits[0] && is_z) return make(n, 0, bq, 2);  // Z -> -Z
      break;
    case GateKind::Z:
      if (q == g.qubits[0] && !is_z) return make(n, bq, 0, 2);  // X -> -X
      break;
    case GateKind::CNOT: {
      int c = g.qubits[0], t = g.qubits[1];
      if (!is_z && q == c) return make(n, bq | (1u << t), 0, 0);  // Xc -> Xc Xt
      if (is_z && q == t) return make(n, 0, bq | (1u << c), 0);   // Zt -> Zc Zt
      break;
    }
    default:
      throw std::logic_error(std::string("non-Clifford gate in tableau: ") +
                             gate_name(g.kind));
  }
  // Generator untouched by this gate.
  return is_z ? make(n, 0, bq, 0) : make(n, bq, 0, 0);
}

}  // namespace

PauliString conjugate_by_gate(const Gate& g, const PauliString& p) {
  // U (i^k prod X^x prod Z^z) U^dag = i^k prod (U X U^dag)^x prod (U Z U^dag)^z
  // with the same fixed product order as the representation.
  PauliString acc = make(p.n, 0, 0, p.k);
  for (int q = 0; q < p.n; ++q)
    if (p.has_bit_x(q)) acc = acc * generator_image(g, p.n, q, false);
  for (int q = 0; q < p.n; ++q)
    if (p.has_bit_z(q)) acc = acc * generator_image(g, p.n, q, true);
  return acc;
}

PauliString tableau_conjugate(const Circuit& w, const PauliString& p) {
  if (w.n_ancilla != 0)
    throw std::logic_error("tableau_conjugate: circuit must be ancilla-free");
  if (w.width() != p.n)
    throw std::logic_error("tableau_conjugate: width mismatch");
  PauliString q = p;
  for (const Gate& g : w.gates) q = conjugate_by_gate(g, q);
  return q;
}

}  // namespace hamforge
