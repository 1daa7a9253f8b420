// Gate-level circuit IR: Clifford gates, Z-rotations, controlled rotations,
// Toffoli/MCX with explicit compute-uncompute pairing, and a cost model that
// counts rotations and Toffoli pairs.
#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hamforge {

enum class GateKind { H, S, Sdg, X, Z, CNOT, Rz, CRz, Toffoli, MCX, MCRz };

const char* gate_name(GateKind k);

struct Gate {
  GateKind kind;
  std::vector<int> qubits;  // [controls..., target]
  double angle = 0.0;       // Rz-family only; Rz(a) = diag(e^{-ia/2}, e^{+ia/2})
  // Explicit Toffoli gates must come in compute/uncompute pairs sharing an id.
  int pair_id = -1;
  // Per-control polarity for MCRz/MCX/Toffoli: bit i set means control i fires
  // on |0> (the synthesis conjugates by X; polarity is tracked for unitary()).
  std::uint32_t negated = 0;

  int target() const { return qubits.back(); }
  int num_controls() const { return static_cast<int>(qubits.size()) - 1; }
  bool is_rotation() const {
    return kind == GateKind::Rz || kind == GateKind::CRz || kind == GateKind::MCRz;
  }

  static Gate h(int q) { return {GateKind::H, {q}}; }
  static Gate s(int q) { return {GateKind::S, {q}}; }
  static Gate sdg(int q) { return {GateKind::Sdg, {q}}; }
  static Gate x(int q) { return {GateKind::X, {q}}; }
  static Gate z(int q) { return {GateKind::Z, {q}}; }
  static Gate cnot(int c, int t) { return {GateKind::CNOT, {c, t}}; }
  static Gate rz(int q, double a) { return {GateKind::Rz, {q}, a}; }
  static Gate crz(int c, int t, double a) { return {GateKind::CRz, {c, t}, a}; }
  static Gate toffoli(int c1, int c2, int t, int pair) {
    return {GateKind::Toffoli, {c1, c2, t}, 0.0, pair};
  }
  static Gate mcx(std::vector<int> controls, int t);
  static Gate mcrz(std::vector<int> controls, int t, double a);
};

struct CostReport {
  long rotations = 0;
  long toffoli_pairs = 0;
  long cnots = 0;
  long single_qubit_cliffords = 0;
  CostReport& operator+=(const CostReport& o);
};

struct Circuit {
  int n_system = 0;
  int n_ancilla = 0;
  std::vector<Gate> gates;  // application order: gates[0] acts first

  int width() const { return n_system + n_ancilla; }
  int add_ancilla() { return n_system + n_ancilla++; }
  void push(Gate g);

  // Full unitary on width() qubits; qubit 0 = most significant index bit.
  // width() <= 12.
  Eigen::MatrixXcd unitary() const;
  // The 2^{n_system} block <i, anc=0| U |j, anc=0>.  Throws if any ancilla
  // fails to return to |0> (column leakage above tol).
  Eigen::MatrixXcd system_unitary(double tol = 1e-9) const;

  // Throws std::logic_error on unpaired/odd explicit Toffolis.
  CostReport cost() const;
  std::string dump() const;

  Circuit dagger() const;
};

// Sequential composition a then b.  Both must share n_system; ancillae are
// unified (max of the two counts); pair ids of b are remapped to stay unique.
Circuit concat(const Circuit& a, const Circuit& b);

// Expands a monolithic MCX with k >= 2 controls into a chain of paired
// Toffolis over fresh ancillae plus one CNOT: cost (0 rotations, k-1 pairs).
Circuit decompose_mcx(const Gate& g, int n_system);

}  // namespace hamforge
