// Clifford diagonalization of mutually commuting Pauli fragments: a library
// of hand-built diagonalizers for the recurring simulation groups, plus a
// generic symplectic-elimination fallback.
//
// Sign convention: diagonalize() returns (w, zterms) such that
//   exp(-i H_j t) = W exp(+i sum_i coeff_i t sign_i Z^{y_i}) W^dagger
// where W is the unitary of circuit w and H_j the fragment's Hamiltonian.
#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "hamforge/circuit.hpp"
#include "hamforge/pauli.hpp"

namespace hamforge {

struct NonCommutingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SignedZString {
  std::uint32_t z_mask = 0;
  int sign = +1;         // the s_i in the convention above
  int source_index = 0;  // index into the fragment's pauli list
};

struct Diagonalization {
  int n = 0;
  Circuit w;
  std::vector<std::pair<double, SignedZString>> zterms;  // coeff = scale*unit
};

// Hand-built diagonalizers.  G1x and G3x have no joint library diagonalizer;
// only their split sub-groups are exposed.
enum class LibraryGroup {
  G_base,  // 4 qubits: the two-body double-excitation group
  G1y, G1x1, G1x2,      // 7 qubits
  G21, G201, G202,      // 6 qubits
  G3y, G3x1, G3x2,      // 5 qubits
};

int library_group_qubits(LibraryGroup g);
const std::vector<PauliString>& library_group_paulis(LibraryGroup g);
Circuit library_diagonalizer(LibraryGroup g);

// Exact-membership match: fragment width equals the group's and every member
// pauli is in the group's set.  Joint G1x/G3x fragments do not match.
std::optional<LibraryGroup> match_library_group(const Fragment& frag);

// Throws NonCommutingError if the fragment members do not pairwise commute.
Diagonalization diagonalize(const Fragment& frag);

// Algebraic check of the sign convention above via tableau conjugation.
bool verify_diagonalization(const Diagonalization& d, const Fragment& frag,
                            std::string* report = nullptr);

}  // namespace hamforge
