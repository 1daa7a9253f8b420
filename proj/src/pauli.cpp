#include "hamforge/pauli.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <sstream>

namespace hamforge {

namespace {
int mod4(int k) { return ((k % 4) + 4) % 4; }
}  // namespace

PauliString PauliString::identity(int n) {
  if (n < 1 || n > kMaxQubits)
    throw ParseError("qubit count out of range: " + std::to_string(n));
  return PauliString{n, 0, 0, 0};
}

PauliString PauliString::parse(std::string_view word) {
  if (word.empty() || word.size() > static_cast<size_t>(kMaxQubits))
    throw ParseError("pauli word length out of range: '" + std::string(word) + "'");
  PauliString p;
  p.n = static_cast<int>(word.size());
  for (int q = 0; q < p.n; ++q) {
    switch (word[q]) {
      case 'I': break;
      case 'X': p.x |= 1u << q; break;
      case 'Z': p.z |= 1u << q; break;
      case 'Y':
        p.x |= 1u << q;
        p.z |= 1u << q;
        p.k += 1;  // Y = i X Z
        break;
      default:
        throw ParseError(std::string("invalid pauli letter '") + word[q] + "'");
    }
  }
  p.k = mod4(p.k);
  return p;
}

bool PauliString::commutes_with(const PauliString& o) const {
  if (n != o.n) throw ParseError("qubit count mismatch");
  int s = std::popcount(x & o.z) + std::popcount(z & o.x);
  return (s & 1) == 0;
}

PauliString PauliString::operator*(const PauliString& o) const {
  if (n != o.n) throw ParseError("qubit count mismatch");
  PauliString r;
  r.n = n;
  r.x = x ^ o.x;
  r.z = z ^ o.z;
  // Moving Z^{z} across X^{o.x} contributes (-1)^{|z & o.x|}.
  r.k = mod4(k + o.k + 2 * std::popcount(z & o.x));
  return r;
}

int PauliString::letter_phase_exp() const {
  return mod4(k - std::popcount(x & z));
}

std::complex<double> PauliString::letter_phase() const {
  static const std::complex<double> table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return table[letter_phase_exp()];
}

double PauliString::sign() const {
  int e = letter_phase_exp();
  if (e == 0) return 1.0;
  if (e == 2) return -1.0;
  throw std::logic_error("pauli string has imaginary letter phase");
}

PauliString PauliString::canonical() const {
  PauliString p = *this;
  p.k = mod4(std::popcount(x & z));
  return p;
}

std::string PauliString::format() const {
  std::string s(n, 'I');
  for (int q = 0; q < n; ++q) {
    bool bx = has_bit_x(q), bz = has_bit_z(q);
    s[q] = bx ? (bz ? 'Y' : 'X') : (bz ? 'Z' : 'I');
  }
  return s;
}

Eigen::MatrixXcd PauliString::dense() const {
  if (n > 12) throw std::logic_error("dense() limited to 12 qubits");
  using cd = std::complex<double>;
  Eigen::Matrix2cd I2 = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd X2, Z2, XZ2;
  X2 << 0, 1, 1, 0;
  Z2 << 1, 0, 0, -1;
  XZ2 << 0, -1, 1, 0;  // X * Z
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Ones(1, 1);
  for (int q = n - 1; q >= 0; --q) {  // qubit 0 ends most significant
    bool bx = has_bit_x(q), bz = has_bit_z(q);
    const Eigen::Matrix2cd& f = bx ? (bz ? XZ2 : X2) : (bz ? Z2 : I2);
    Eigen::MatrixXcd next(m.rows() * 2, m.cols() * 2);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        next.block(a * m.rows(), b * m.cols(), m.rows(), m.cols()) = f(a, b) * m;
    m = std::move(next);
  }
  static const cd iq[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return iq[mod4(k)] * m;
}

Hamiltonian Hamiltonian::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  int n = -1;
  double identity = 0.0;
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> acc;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> order;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double c;
    std::string word;
    if (!(ls >> c)) {
      std::string rest;
      if (ls.clear(), ls >> rest)
        throw ParseError("line " + std::to_string(lineno) + ": expected coefficient");
      continue;  // blank / comment-only line
    }
    if (!(ls >> word))
      throw ParseError("line " + std::to_string(lineno) + ": missing pauli word");
    std::string extra;
    if (ls >> extra)
      throw ParseError("line " + std::to_string(lineno) + ": trailing token '" + extra + "'");
    PauliString p;
    try {
      p = PauliString::parse(word);
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (n < 0) n = p.n;
    if (p.n != n)
      throw ParseError("line " + std::to_string(lineno) + ": width " +
                       std::to_string(p.n) + " != " + std::to_string(n));
    if (p.is_identity()) {
      identity += c;
    } else {
      auto key = std::make_pair(p.x, p.z);
      if (!acc.count(key)) order.push_back(key);
      acc[key] += c;
    }
  }
  if (n < 0) throw ParseError("empty hamiltonian");
  std::vector<Term> terms;
  for (auto& key : order) {
    double c = acc[key];
    if (std::abs(c) < 1e-15) continue;
    PauliString p{n, key.first, key.second, 0};
    terms.push_back(Term{c, p.canonical()});
  }
  return from_terms(n, std::move(terms), identity);
}

Hamiltonian Hamiltonian::from_terms(int n, std::vector<Term> terms,
                                    double identity_coeff) {
  Hamiltonian h;
  h.n = n;
  h.identity_coeff = identity_coeff;
  std::map<std::pair<std::uint32_t, std::uint32_t>, size_t> index;
  for (auto& t : terms) {
    if (t.pauli.n != n) throw ParseError("term width mismatch");
    double c = t.coeff * t.pauli.sign();  // fold any -1 letter phase
    PauliString p = t.pauli.canonical();
    if (p.is_identity()) {
      h.identity_coeff += c;
      continue;
    }
    auto key = std::make_pair(p.x, p.z);
    auto it = index.find(key);
    if (it == index.end()) {
      index[key] = h.terms.size();
      h.terms.push_back(Term{c, p});
    } else {
      h.terms[it->second].coeff += c;
    }
  }
  std::erase_if(h.terms, [](const Term& t) { return std::abs(t.coeff) < 1e-15; });
  return h;
}

double Hamiltonian::one_norm() const {
  double s = 0;
  for (auto& t : terms) s += std::abs(t.coeff);
  return s;
}

Eigen::MatrixXcd Hamiltonian::dense() const {
  Eigen::MatrixXcd m = identity_coeff *
      Eigen::MatrixXcd::Identity(1 << n, 1 << n);
  for (auto& t : terms) m += t.coeff * t.pauli.dense();
  return m;
}

std::string Hamiltonian::format() const {
  std::ostringstream out;
  out.precision(17);
  if (identity_coeff != 0.0)
    out << identity_coeff << ' ' << std::string(n, 'I') << '\n';
  for (auto& t : terms) out << t.coeff << ' ' << t.pauli.format() << '\n';
  return out.str();
}

Hamiltonian Fragment::to_hamiltonian() const {
  std::vector<Term> ts;
  ts.reserve(paulis.size());
  for (auto& t : paulis) ts.push_back(Term{scale * t.coeff, t.pauli});
  return Hamiltonian::from_terms(n, std::move(ts));
}

bool Fragment::commuting() const {
  for (size_t i = 0; i < paulis.size(); ++i)
    for (size_t j = i + 1; j < paulis.size(); ++j)
      if (!paulis[i].pauli.commutes_with(paulis[j].pauli)) return false;
  return true;
}

}  // namespace hamforge
