// Phase-function synthesis: build the diagonal phase table of a diagonalized
// fragment, bucket distinct phase magnitudes (minimizing over an ignorable
// global-phase offset), compress minterms (Quine-McCluskey), and emit the
// evolution circuit W . D . W^dagger with one controlled rotation per
// distinct |theta|.  A small library of hand-built templates reproduces the
// published per-group costs for the recurring fragment shapes.
#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "hamforge/circuit.hpp"
#include "hamforge/diagonalize.hpp"
#include "hamforge/pauli.hpp"

namespace hamforge {

struct PhaseTable {
  int n = 0;
  // phi indexed by qubit-assignment mask xm: bit q of xm = value of qubit q.
  std::vector<double> phi;
  // Global-phase offset chosen by distinct_magnitudes (0 until then).
  double offset = 0.0;

  double value(std::uint32_t xm) const { return phi[xm]; }
};

// phi(x) = sum_i value_i * sign_i * (-1)^{popcount(y_i & x)};  value = coeff*t.
PhaseTable phase_table(
    const std::vector<std::tuple<double, std::uint32_t, int>>& zterms, int n);
PhaseTable phase_table(const Diagonalization& d, double t);

struct MintermCover {
  double theta = 0.0;  // positive magnitude
  std::vector<std::string> pos, neg;  // ternary strings over {0,1,*}
};

// One cover per distinct nonzero |phi - offset|, descending by magnitude,
// after choosing the offset that minimizes the number of covers (global
// phase is ignorable).  Stores the chosen offset into pt.offset.
// Relative bucketing tolerance 1e-9.
std::vector<MintermCover> distinct_magnitudes(PhaseTable& pt);

// Quine-McCluskey prime-implicant reduction, applied independently to the
// pos and neg sets; the selected implicants are pairwise disjoint and expand
// exactly to the input set.
MintermCover compress_minterms(const MintermCover& cover);

// Two-ancilla routing circuit applying e^{i theta} on pos assignments and
// e^{-i theta} on neg assignments for each cover (one CRz per cover).
// Detects the pure-parity special case and emits a CNOT ladder + Rz instead.
Circuit synthesize_phase_circuit(const std::vector<MintermCover>& covers,
                                 int n);

// Hand-built template circuits keyed on the fragment's Pauli structure.
struct TemplateResult {
  Circuit circuit;
  std::string name;
};
std::optional<TemplateResult> try_template(const Fragment& frag, double t);

// Full pipeline: template if one matches, otherwise
// concat(W^dagger-section, phase section, W-section) from diagonalize().
Circuit synthesize_exponential(const Fragment& frag, double t);
// Generic path only (no template shortcut); used for cost comparisons.
Circuit synthesize_exponential_generic(const Fragment& frag, double t);

}  // namespace hamforge
