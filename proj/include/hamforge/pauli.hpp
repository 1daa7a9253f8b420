// Pauli strings over up to 20 qubits in symplectic (x|z) bitmask form,
// Hamiltonians as weighted Pauli sums, and commuting fragments.
//
// Representation: a PauliString is  i^k * prod_q X_q^{x_q} Z_q^{z_q}
// with the X block written before the Z block.  Qubit 0 is the leftmost
// letter of the printed word and the most significant bit of a basis index.
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace hamforge {

inline constexpr int kMaxQubits = 20;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PauliString {
  int n = 0;
  std::uint32_t x = 0;  // bit (n-1-q) would be wrong; we store bit q for qubit q
  std::uint32_t z = 0;
  int k = 0;  // phase exponent: operator = i^k * prod X^x Z^z

  static PauliString identity(int n);
  // Parses a word over {I,X,Y,Z}; result has letter phase +1 (Y contributes
  // x=z=1 and k+=1 since Y = i X Z).
  static PauliString parse(std::string_view word);

  bool is_identity() const { return x == 0 && z == 0; }
  bool has_bit_x(int q) const { return (x >> q) & 1u; }
  bool has_bit_z(int q) const { return (z >> q) & 1u; }

  bool commutes_with(const PauliString& o) const;
  PauliString operator*(const PauliString& o) const;

  // Phase exponent relative to the product of letters (I/X/Y/Z): the operator
  // equals i^{letter_phase_exp()} * (word of letters).  0,1,2,3 -> +1,+i,-1,-i.
  int letter_phase_exp() const;
  std::complex<double> letter_phase() const;
  // Requires the letter phase to be real; returns +1.0 or -1.0.
  double sign() const;

  // Same (x,z) masks with letter phase reset to +1.
  PauliString canonical() const;
  // The letters only (phase ignored).
  std::string format() const;

  // Dense 2^n x 2^n matrix including the i^k phase.  n <= 12.
  Eigen::MatrixXcd dense() const;

  bool same_letters(const PauliString& o) const {
    return n == o.n && x == o.x && z == o.z;
  }
  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.n == b.n && a.x == b.x && a.z == b.z && (a.k - b.k) % 4 == 0;
  }
};

struct Term {
  double coeff = 0.0;
  PauliString pauli;  // canonical (letter phase +1)
};

// A Hamiltonian is a merged list of non-identity terms plus a separately
// tracked identity coefficient (retained but excluded from the 1-norm).
struct Hamiltonian {
  int n = 0;
  std::vector<Term> terms;
  double identity_coeff = 0.0;

  // Text format: one "<coeff> <word>" per line, '#' comments, blank lines ok.
  static Hamiltonian parse(const std::string& text);
  static Hamiltonian from_terms(int n, std::vector<Term> terms,
                                double identity_coeff = 0.0);

  double one_norm() const;
  Eigen::MatrixXcd dense() const;  // n <= 12
  std::string format() const;
};

// A scaled set of mutually commuting Paulis: H_j = scale * sum_i unit_i P_i.
struct Fragment {
  int n = 0;
  double scale = 1.0;
  std::vector<Term> paulis;  // unit coefficients (normally +-1)
  std::string label;

  Hamiltonian to_hamiltonian() const;
  bool commuting() const;
  Eigen::MatrixXcd dense() const { return to_hamiltonian().dense(); }
};

}  // namespace hamforge
