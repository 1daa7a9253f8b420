// Exact Clifford conjugation of Pauli strings, including signs, by expanding
// a Pauli in X/Z generators and multiplying the per-gate generator images.
#pragma once

#include "hamforge/circuit.hpp"
#include "hamforge/pauli.hpp"

namespace hamforge {

// g P g^dagger for a single Clifford gate (H, S, Sdg, X, Z, CNOT).
// Throws std::logic_error for non-Clifford kinds.
PauliString conjugate_by_gate(const Gate& g, const PauliString& p);

// W P W^dagger where W is the circuit's unitary (gates in application order).
// The circuit must be Clifford-only and ancilla-free.
PauliString tableau_conjugate(const Circuit& w, const PauliString& p);

}  // namespace hamforge
