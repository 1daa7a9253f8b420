#include "hamforge/diagonalize.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <sstream>

#include "hamforge/tableau.hpp"

namespace hamforge {

namespace {

std::vector<PauliString> parse_all(std::initializer_list<const char*> words) {
  std::vector<PauliString> v;
  for (const char* w : words) v.push_back(PauliString::parse(w));
  return v;
}

}  // namespace

int library_group_qubits(LibraryGroup g) {
  switch (g) {
    case LibraryGroup::G_base: return 4;
    case LibraryGroup::G1y:
    case LibraryGroup::G1x1:
    case LibraryGroup::G1x2: return 7;
    case LibraryGroup::G21:
    case LibraryGroup::G201:
    case LibraryGroup::G202: return 6;
    case LibraryGroup::G3y:
    case LibraryGroup::G3x1:
    case LibraryGroup::G3x2: return 5;
  }
  throw std::logic_error("bad library group");
}

const std::vector<PauliString>& library_group_paulis(LibraryGroup g) {
  static const auto base = parse_all({"XXXX", "YYXX", "YXYX", "YXXY",
                                      "XYYX", "XYXY", "XXYY", "YYYY"});
  static const auto g1y = parse_all({"YXXYIII", "XYXYIII", "XXYYIII",
                                     "YYYYIII", "IIIYYXX", "IIIYXYX",
                                     "IIIYXXY", "IIIYYYY"});
  static const auto g1x1 = parse_all({"XXXXIII", "YYXXIII", "YXYXIII",
                                      "XYYXIII"});
  static const auto g1x2 = parse_all({"IIIXXXX", "IIIXYYX", "IIIXYXY",
                                      "IIIXXYY"});
  static const auto g21 = parse_all({"YXYXII", "YXXYII", "XYYXII", "XYXYII",
                                     "IIYXYX", "IIXYYX", "IIYXXY", "IIXYXY"});
  static const auto g201 = parse_all({"XXXXII", "YYXXII", "XXYYII", "YYYYII"});
  static const auto g202 = parse_all({"IIXXXX", "IIYYXX", "IIXXYY", "IIYYYY"});
  static const auto g3y = parse_all({"YYXXI", "YXYXI", "YXXYI", "YYYYI",
                                     "IYXXY", "IXYXY", "IXXYY", "IYYYY"});
  static const auto g3x1 = parse_all({"XXXXI", "XYYXI", "XYXYI", "XXYYI"});
  static const auto g3x2 = parse_all({"IXXXX", "IYYXX", "IYXYX", "IXYYX"});
  switch (g) {
    case LibraryGroup::G_base: return base;
    case LibraryGroup::G1y: return g1y;
    case LibraryGroup::G1x1: return g1x1;
    case LibraryGroup::G1x2: return g1x2;
    case LibraryGroup::G21: return g21;
    case LibraryGroup::G201: return g201;
    case LibraryGroup::G202: return g202;
    case LibraryGroup::G3y: return g3y;
    case LibraryGroup::G3x1: return g3x1;
    case LibraryGroup::G3x2: return g3x2;
  }
  throw std::logic_error("bad library group");
}

Circuit library_diagonalizer(LibraryGroup g) {
  Circuit c{library_group_qubits(g), 0};
  auto cx = [&](int a, int b) { c.push(Gate::cnot(a, b)); };
  auto h = [&](int q) { c.push(Gate::h(q)); };
  auto z = [&](int q) { c.push(Gate::z(q)); };
  // Gates are listed in application order (first gate acts first).
  switch (g) {
    case LibraryGroup::G_base:
      h(0); cx(0, 3); cx(0, 2); cx(0, 1);
      break;
    case LibraryGroup::G1y:
      cx(3, 0); cx(3, 1); cx(3, 2);
      h(3);
      cx(3, 4); cx(3, 5); cx(3, 6);
      cx(3, 0); cx(3, 1); cx(3, 2);
      z(3); h(3);
      cx(3, 0); cx(3, 1); cx(3, 2);
      break;
    case LibraryGroup::G1x1:
      h(3); cx(3, 2); cx(3, 1); cx(3, 0);
      break;
    case LibraryGroup::G1x2:
      h(3); cx(3, 6); cx(3, 5); cx(3, 4);
      break;
    case LibraryGroup::G21:
      // CNOT_{(3,1)} and CNOT_{(3,5)} fan out to the full qubit pair.
      cx(2, 0); cx(2, 1);
      h(2);
      cx(2, 4); cx(2, 5);
      cx(2, 0); cx(2, 1);
      z(2); h(2);
      cx(2, 3);
      cx(2, 0); cx(2, 1);
      break;
    case LibraryGroup::G201:
      h(2); cx(2, 3); cx(2, 1); cx(2, 0);
      break;
    case LibraryGroup::G202:
      h(2); cx(2, 5); cx(2, 4); cx(2, 3);
      break;
    case LibraryGroup::G3y:
      cx(1, 0); h(1); cx(1, 0); cx(1, 4); z(1); h(1); cx(1, 0); cx(1, 2); cx(1, 3);
      break;
    case LibraryGroup::G3x1:
      h(1); cx(1, 0); cx(1, 2); cx(1, 3);
      break;
    case LibraryGroup::G3x2:
      h(1); cx(1, 2); cx(1, 3); cx(1, 4);
      break;
  }
  return c;
}

std::optional<LibraryGroup> match_library_group(const Fragment& frag) {
  if (frag.paulis.empty()) return std::nullopt;
  static const LibraryGroup all[] = {
      LibraryGroup::G_base, LibraryGroup::G1y, LibraryGroup::G1x1,
      LibraryGroup::G1x2,   LibraryGroup::G21, LibraryGroup::G201,
      LibraryGroup::G202,   LibraryGroup::G3y, LibraryGroup::G3x1,
      LibraryGroup::G3x2};
  for (LibraryGroup g : all) {
    if (library_group_qubits(g) != frag.n) continue;
    const auto& members = library_group_paulis(g);
    bool ok = true;
    for (const auto& t : frag.paulis) {
      bool found = false;
      for (const auto& m : members)
        if (m.same_letters(t.pauli)) { found = true; break; }
      if (!found) { ok = false; break; }
    }
    if (ok) return g;
  }
  return std::nullopt;
}

namespace {

// Builds a Clifford circuit V (application order) with V P V^dag diagonal for
// every member, by symplectic elimination over an independent generator set.
Circuit generic_diagonalizing_conjugator(const Fragment& frag) {
  const int n = frag.n;
  Circuit v{n, 0};
  std::vector<PauliString> img;
  for (const auto& t : frag.paulis) img.push_back(t.pauli);
  // Already diagonal: the conjugator is the identity circuit.
  if (std::all_of(img.begin(), img.end(),
                  [](const PauliString& p) { return p.x == 0; }))
    return v;
  auto apply = [&](Gate g) {
    for (auto& p : img) p = conjugate_by_gate(g, p);
    v.push(std::move(g));
  };

  // Independent generator subset over GF(2) rows (x | z).
  std::vector<std::uint64_t> basis;
  std::vector<size_t> gens;
  for (size_t i = 0; i < img.size(); ++i) {
    std::uint64_t vec = (std::uint64_t(img[i].x) << n) | img[i].z;
    for (std::uint64_t b : basis) vec = std::min(vec, vec ^ b);
    if (vec) { basis.push_back(vec); gens.push_back(i); }
  }

  std::vector<char> fixed(n, 0);
  for (size_t gi : gens) {
    int qi = -1;
    if (img[gi].x != 0) {
      // Clear Y's on the x-support (Sdg = S then Z maps Y -> X).
      for (int q = 0; q < n; ++q)
        if (img[gi].has_bit_x(q) && img[gi].has_bit_z(q)) {
          apply(Gate::s(q));
          apply(Gate::z(q));
        }
      qi = std::countr_zero(img[gi].x);
      for (int q = qi + 1; q < n; ++q)
        if (img[gi].has_bit_x(q)) apply(Gate::cnot(qi, q));
      apply(Gate::h(qi));
    } else {
      for (int q = 0; q < n; ++q)
        if (img[gi].has_bit_z(q) && !fixed[q]) { qi = q; break; }
      if (qi < 0) throw std::logic_error("elimination lost independence");
    }
    // Reduce to a bare Z on qi so later rounds cannot disturb it.
    std::vector<int> extra;
    for (int q = 0; q < n; ++q)
      if (q != qi && img[gi].has_bit_z(q)) extra.push_back(q);
    for (int q : extra) apply(Gate::cnot(q, qi));
    fixed[qi] = 1;
  }
  for (const auto& p : img)
    if (p.x != 0) throw std::logic_error("elimination failed to diagonalize");
  return v;
}

}  // namespace

Diagonalization diagonalize(const Fragment& frag) {
  if (frag.paulis.empty()) throw std::logic_error("empty fragment");
  if (!frag.commuting())
    throw NonCommutingError("fragment members do not pairwise commute");
  Diagonalization d;
  d.n = frag.n;
  if (auto lib = match_library_group(frag)) {
    d.w = library_diagonalizer(*lib);
  } else {
    d.w = generic_diagonalizing_conjugator(frag).dagger();
  }
  Circuit v = d.w.dagger();
  for (size_t i = 0; i < frag.paulis.size(); ++i) {
    PauliString q = tableau_conjugate(v, frag.paulis[i].pauli);
    if (q.x != 0)
      throw std::logic_error("diagonalizer left an X component on term " +
                             std::to_string(i));
    SignedZString zs;
    zs.z_mask = q.z;
    zs.sign = q.sign() > 0 ? -1 : +1;  // s_i = -(sign of W^dag P_i W)
    zs.source_index = static_cast<int>(i);
    d.zterms.emplace_back(frag.scale * frag.paulis[i].coeff, zs);
  }
  return d;
}

bool verify_diagonalization(const Diagonalization& d, const Fragment& frag,
                            std::string* report) {
  auto fail = [&](const std::string& msg) {
    if (report) *report = msg;
    return false;
  };
  if (d.n != frag.n) return fail("width mismatch");
  if (d.w.n_ancilla != 0) return fail("diagonalizer uses ancillae");
  if (d.zterms.size() != frag.paulis.size()) return fail("zterm count mismatch");
  Circuit v = d.w.dagger();
  std::vector<char> seen(frag.paulis.size(), 0);
  for (auto& [coeff, zs] : d.zterms) {
    if (zs.source_index < 0 ||
        zs.source_index >= static_cast<int>(frag.paulis.size()) ||
        seen[zs.source_index])
      return fail("bad source index");
    seen[zs.source_index] = 1;
    const Term& t = frag.paulis[zs.source_index];
    if (std::abs(coeff - frag.scale * t.coeff) > 1e-12 * (1 + std::abs(coeff)))
      return fail("coefficient mismatch on term " +
                  std::to_string(zs.source_index));
    PauliString q;
    try {
      q = tableau_conjugate(v, t.pauli);
    } catch (const std::exception& e) {
      return fail(e.what());
    }
    if (q.x != 0 || q.z != zs.z_mask)
      return fail("mask mismatch on term " + std::to_string(zs.source_index));
    double sigma;
    try {
      sigma = q.sign();
    } catch (const std::exception&) {
      return fail("imaginary phase on term " + std::to_string(zs.source_index));
    }
    if (zs.sign != (sigma > 0 ? -1 : +1))
      return fail("sign mismatch on term " + std::to_string(zs.source_index));
  }
  return true;
}

}  // namespace hamforge
