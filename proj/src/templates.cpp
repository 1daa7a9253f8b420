// Hand-built evolution templates for the recurring commuting-group shapes.
// Each template reproduces the published (rotation, Toffoli-pair) cost for
// its shape; try_template() declines anything it cannot match exactly and
// the caller falls back to the generic synthesis path.
#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>

#include "hamforge/diagonalize.hpp"
#include "hamforge/phase_synth.hpp"

namespace hamforge {

namespace {

struct FlatTerm {
  double value = 0;  // scale * coeff * letter sign
  PauliString p;     // canonical
};

std::vector<FlatTerm> flatten(const Fragment& frag) {
  std::vector<FlatTerm> out;
  for (const auto& t : frag.paulis)
    out.push_back({frag.scale * t.coeff * t.pauli.sign(), t.pauli.canonical()});
  return out;
}

// The single shared letter of a Pauli word, or 0 if letters are mixed.
char uniform_letter(const PauliString& p) {
  char letter = 0;
  std::string s = p.format();
  for (char c : s) {
    if (c == 'I') continue;
    if (letter == 0) letter = c;
    else if (letter != c) return 0;
  }
  return letter;
}

int weight(const PauliString& p) { return std::popcount(p.x | p.z); }

bool near(double a, double b, double scale) {
  return std::abs(a - b) <= 1e-9 * std::max(1.0, scale);
}

// Basis change taking the letter to Z on one qubit: pre gates implement
// W^dagger (applied first), post gates implement W.
void letter_pre(Circuit& c, int q, char letter) {
  if (letter == 'X') c.push(Gate::h(q));
  else if (letter == 'Y') { c.push(Gate::sdg(q)); c.push(Gate::h(q)); }
}
void letter_post(Circuit& c, int q, char letter) {
  if (letter == 'X') c.push(Gate::h(q));
  else if (letter == 'Y') { c.push(Gate::h(q)); c.push(Gate::s(q)); }
}

// ---- Z_a + Z_b with a common coefficient: one controlled rotation. ----
std::optional<Circuit> t_zpair(const Fragment& frag,
                               const std::vector<FlatTerm>& ft, double t) {
  if (ft.size() != 2) return std::nullopt;
  for (const auto& f : ft)
    if (f.p.x != 0 || weight(f.p) != 1) return std::nullopt;
  if (ft[0].p.z == ft[1].p.z) return std::nullopt;
  double v = ft[0].value;
  if (!near(ft[1].value, v, std::abs(v)) || v == 0) return std::nullopt;
  int a = std::countr_zero(ft[0].p.z), b = std::countr_zero(ft[1].p.z);
  double V = v * t;
  Circuit c{frag.n, 0};
  c.push(Gate::cnot(a, b));
  c.push(Gate::x(b));
  c.push(Gate::crz(b, a, 4 * V));  // fires iff x_a == x_b
  c.push(Gate::x(b));
  c.push(Gate::cnot(a, b));
  return c;
}

// ---- Z_a Z_b + Z_c Z_d on disjoint pairs: one rotation, two pairs. ----
std::optional<Circuit> t_zmatch(const Fragment& frag,
                                const std::vector<FlatTerm>& ft, double t) {
  if (ft.size() != 2) return std::nullopt;
  for (const auto& f : ft)
    if (f.p.x != 0 || weight(f.p) != 2) return std::nullopt;
  if (ft[0].p.z & ft[1].p.z) return std::nullopt;
  double v = ft[0].value;
  if (!near(ft[1].value, v, std::abs(v)) || v == 0) return std::nullopt;
  int a = std::countr_zero(ft[0].p.z);
  int b = std::countr_zero(ft[0].p.z & ~(1u << a));
  int cq = std::countr_zero(ft[1].p.z);
  int d = std::countr_zero(ft[1].p.z & ~(1u << cq));
  double V = v * t;
  Circuit c{frag.n, 0};
  int A = c.add_ancilla(), B = c.add_ancilla();
  c.push(Gate::cnot(a, b));
  c.push(Gate::cnot(cq, d));
  Gate t0 = Gate::toffoli(b, d, A, 0);
  t0.negated = 3;  // both parities even
  c.push(t0);
  c.push(Gate::toffoli(b, d, B, 1));  // both parities odd
  c.push(Gate::cnot(B, A));
  c.push(Gate::crz(A, B, 4 * V));
  c.push(Gate::cnot(B, A));
  c.push(Gate::toffoli(b, d, B, 1));
  c.push(t0);
  c.push(Gate::cnot(cq, d));
  c.push(Gate::cnot(a, b));
  return c;
}

// Recover a single cycle v0-v1-...-v{k-1}-v0 from weight-2 edge supports.
std::optional<std::vector<int>> cycle_order(
    const std::vector<std::uint32_t>& edges) {
  const size_t k = edges.size();
  std::uint32_t verts = 0;
  for (auto e : edges) verts |= e;
  if (std::popcount(verts) != static_cast<int>(k)) return std::nullopt;
  // adjacency: each vertex must have exactly two incident edges
  std::vector<int> vlist;
  for (int q = 0; q < 32; ++q)
    if (verts >> q & 1) vlist.push_back(q);
  auto neighbors = [&](int v) {
    std::vector<int> nb;
    for (auto e : edges)
      if (e >> v & 1) {
        std::uint32_t other = e & ~(1u << v);
        if (std::popcount(other) != 1) return std::vector<int>{};
        nb.push_back(std::countr_zero(other));
      }
    return nb;
  };
  for (int v : vlist)
    if (neighbors(v).size() != 2) return std::nullopt;
  std::vector<int> order;
  int start = vlist[0];
  auto nb0 = neighbors(start);
  int prev = start, cur = std::min(nb0[0], nb0[1]);
  order.push_back(start);
  while (cur != start) {
    order.push_back(cur);
    if (order.size() > k) return std::nullopt;
    auto nb = neighbors(cur);
    int next = (nb[0] == prev) ? nb[1] : nb[0];
    prev = cur;
    cur = next;
  }
  if (order.size() != k) return std::nullopt;
  return order;
}

// Core for a uniform-coefficient 4-cycle of ZZ couplings (already in the Z
// basis): one doubly-controlled rotation.
void ring4_core(Circuit& c, int v1, int v2, int v3, int v4, double V,
                int& next_pair) {
  c.push(Gate::cnot(v3, v4));  // e3
  c.push(Gate::cnot(v2, v3));  // e2
  c.push(Gate::cnot(v1, v2));  // e1
  c.push(Gate::cnot(v2, v3));  // e1 xor e2
  c.push(Gate::cnot(v2, v4));  // e1 xor e3
  Gate g = Gate::mcrz({v3, v4}, v2, 8 * V);
  g.negated = 3;  // fires when e1 = e2 = e3
  c.push(g);
  next_pair += 1;  // MCRz with 2 controls costs one Toffoli pair
  c.push(Gate::cnot(v2, v4));
  c.push(Gate::cnot(v2, v3));
  c.push(Gate::cnot(v1, v2));
  c.push(Gate::cnot(v2, v3));
  c.push(Gate::cnot(v3, v4));
}

struct RingShape {
  char letter;
  double value;
  std::vector<int> order;
};

std::optional<RingShape> match_ring(const std::vector<FlatTerm>& ft,
                                    size_t len) {
  if (ft.size() != len) return std::nullopt;
  RingShape rs;
  rs.letter = uniform_letter(ft[0].p);
  if (rs.letter == 0) return std::nullopt;
  rs.value = ft[0].value;
  std::vector<std::uint32_t> edges;
  for (const auto& f : ft) {
    if (uniform_letter(f.p) != rs.letter || weight(f.p) != 2)
      return std::nullopt;
    if (!near(f.value, rs.value, std::abs(rs.value))) return std::nullopt;
    edges.push_back(f.p.x | f.p.z);
  }
  if (rs.value == 0) return std::nullopt;
  auto order = cycle_order(edges);
  if (!order) return std::nullopt;
  rs.order = *order;
  return rs;
}

std::optional<Circuit> t_ring4(const Fragment& frag,
                               const std::vector<FlatTerm>& ft, double t) {
  auto rs = match_ring(ft, 4);
  if (!rs) return std::nullopt;
  Circuit c{frag.n, 0};
  for (int v : rs->order) letter_pre(c, v, rs->letter);
  int pairs = 0;
  ring4_core(c, rs->order[0], rs->order[1], rs->order[2], rs->order[3],
             rs->value * t, pairs);
  for (int v : rs->order) letter_post(c, v, rs->letter);
  return c;
}

// 6-cycle: split into a 4-cycle with a virtual chord plus a majority-vote
// block; the chord contributions cancel exactly.
std::optional<Circuit> t_ring6(const Fragment& frag,
                               const std::vector<FlatTerm>& ft, double t) {
  auto rs = match_ring(ft, 6);
  if (!rs) return std::nullopt;
  const auto& o = rs->order;
  double V = rs->value * t;
  Circuit c{frag.n, 0};
  for (int v : o) letter_pre(c, v, rs->letter);
  int pairs = 0;
  // Part A: edges (o0,o1),(o1,o2),(o2,o3) plus the +chord (o3,o0).
  ring4_core(c, o[0], o[1], o[2], o[3], V, pairs);
  // Part B: edges (o3,o4),(o4,o5),(o5,o0) minus the chord; the eigenvalue is
  // 2V * (-1)^{majority(e4,e5,e6)}.
  int A = c.add_ancilla();
  c.push(Gate::cnot(o[5], o[0]));  // e6 on o0
  c.push(Gate::cnot(o[4], o[5]));  // e5 on o5
  c.push(Gate::cnot(o[3], o[4]));  // e4 on o4
  c.push(Gate::toffoli(o[4], o[5], A, 2));
  c.push(Gate::cnot(o[4], o[5]));  // o5 holds e4 xor e5
  c.push(Gate::toffoli(o[5], o[0], A, 3));  // A = majority
  c.push(Gate::rz(A, 4 * V));
  c.push(Gate::toffoli(o[5], o[0], A, 3));
  c.push(Gate::cnot(o[4], o[5]));
  c.push(Gate::toffoli(o[4], o[5], A, 2));
  c.push(Gate::cnot(o[3], o[4]));
  c.push(Gate::cnot(o[4], o[5]));
  c.push(Gate::cnot(o[5], o[0]));
  for (int v : o) letter_post(c, v, rs->letter);
  return c;
}

// ---- Double-excitation group with a three-parameter coefficient pattern
// (covers the pure excitation operator as a special case). ----
std::optional<Circuit> t_excitation(const Fragment& frag,
                                    const std::vector<FlatTerm>& ft,
                                    double t) {
  if (frag.n != 4 || ft.empty() || ft.size() > 8) return std::nullopt;
  const auto& members = library_group_paulis(LibraryGroup::G_base);
  double A[8] = {0};
  double maxabs = 0;
  for (const auto& f : ft) {
    int idx = -1;
    for (int i = 0; i < 8; ++i)
      if (members[i].same_letters(f.p)) { idx = i; break; }
    if (idx < 0) return std::nullopt;
    A[idx] = f.value * t;
    maxabs = std::max(maxabs, std::abs(A[idx]));
  }
  if (maxabs == 0) return std::nullopt;
  double h1 = (A[1] - A[0]) / 2, h2 = (A[3] - A[0]) / 2,
         h3 = (A[0] - A[2]) / 2;
  const double want[8] = {-h1 - h2 + h3, h1 - h2 + h3, -h1 - h2 - h3,
                          -h1 + h2 + h3, -h1 + h2 + h3, -h1 - h2 - h3,
                          h1 - h2 + h3,  -h1 - h2 + h3};
  for (int i = 0; i < 8; ++i)
    if (!near(A[i], want[i], maxabs)) return std::nullopt;

  Circuit c{frag.n, 0};
  // W^dagger of the group diagonalizer.
  c.push(Gate::cnot(0, 1));
  c.push(Gate::cnot(0, 2));
  c.push(Gate::cnot(0, 3));
  c.push(Gate::h(0));
  // Disjoint patterns over (q1,q2,q3): B = 011, C = 110, D = 101, with
  // per-pattern phases 8h1, 8h2, -8h3 (antisymmetric in q0).
  struct Pat {
    double v;
    int anc = -1;
  };
  Pat pb{8 * h1}, pc{8 * h2}, pd{-8 * h3};
  const double tol = 1e-9 * std::max(1.0, maxabs);
  std::vector<Pat*> present;
  for (Pat* p : {&pb, &pc, &pd})
    if (std::abs(p->v) > tol) present.push_back(p);
  if (present.empty()) return c;  // zero fragment after the basis change

  int next_pair = 0;
  std::vector<Gate> undo;
  auto put = [&](Gate g) {
    c.push(g);
    undo.push_back(std::move(g));
  };
  int Aq = c.add_ancilla();
  put(Gate::toffoli(2, 3, Aq, next_pair++));  // A = q2 AND q3
  if (std::abs(pb.v) > tol) {
    pb.anc = c.add_ancilla();
    Gate g = Gate::toffoli(Aq, 1, pb.anc, next_pair++);
    g.negated = 2;  // q1 = 0
    put(g);
  }
  put(Gate::cnot(Aq, 2));
  put(Gate::cnot(Aq, 3));
  if (std::abs(pc.v) > tol) {
    pc.anc = c.add_ancilla();
    put(Gate::toffoli(1, 2, pc.anc, next_pair++));
  }
  if (std::abs(pd.v) > tol) {
    pd.anc = c.add_ancilla();
    put(Gate::toffoli(1, 3, pd.anc, next_pair++));
  }
  // Group the present patterns by |v| and emit one CRz per magnitude.
  std::vector<char> done(present.size(), 0);
  for (size_t i = 0; i < present.size(); ++i) {
    if (done[i]) continue;
    std::vector<size_t> group{i};
    for (size_t j = i + 1; j < present.size(); ++j)
      if (!done[j] &&
          near(std::abs(present[j]->v), std::abs(present[i]->v), maxabs)) {
        group.push_back(j);
        done[j] = 1;
      }
    done[i] = 1;
    int rep = present[i]->anc;
    double vrep = present[i]->v;
    std::vector<int> merged, flipped;
    for (size_t k = 1; k < group.size(); ++k) {
      Pat* q = present[group[k]];
      c.push(Gate::cnot(q->anc, rep));
      merged.push_back(q->anc);
      if ((q->v > 0) != (vrep > 0)) flipped.push_back(q->anc);
    }
    for (int a : flipped) c.push(Gate::cnot(a, 0));
    c.push(Gate::crz(rep, 0, -2 * vrep));
    for (auto it = flipped.rbegin(); it != flipped.rend(); ++it)
      c.push(Gate::cnot(*it, 0));
    for (auto it = merged.rbegin(); it != merged.rend(); ++it)
      c.push(Gate::cnot(*it, rep));
  }
  for (auto it = undo.rbegin(); it != undo.rend(); ++it) c.push(*it);
  // W of the group diagonalizer.
  c.push(Gate::h(0));
  c.push(Gate::cnot(0, 3));
  c.push(Gate::cnot(0, 2));
  c.push(Gate::cnot(0, 1));
  return c;
}

// ---- Four uniform-magnitude terms whose diagonalized Z-masks are linearly
// independent: reduce to Z0+Z1+Z2+Z3 and split by eigenvalue magnitude. ----
std::optional<Circuit> t_indep4(const Fragment& frag, double t) {
  if (frag.paulis.size() != 4 || frag.n < 4) return std::nullopt;
  Diagonalization d;
  try {
    d = diagonalize(frag);
  } catch (const NonCommutingError&) {
    return std::nullopt;
  }
  const int n = frag.n;
  std::vector<std::uint32_t> y;
  std::vector<double> v;
  for (const auto& [coeff, zs] : d.zterms) {
    y.push_back(zs.z_mask);
    v.push_back(coeff * t * zs.sign);
  }
  double mag = std::abs(v[0]);
  if (mag == 0) return std::nullopt;
  for (double vi : v)
    if (!near(std::abs(vi), mag, mag)) return std::nullopt;
  // Independence check.
  {
    std::vector<std::uint32_t> basis;
    for (std::uint32_t m : y) {
      for (auto b : basis) m = std::min(m, m ^ b);
      if (!m) return std::nullopt;
      basis.push_back(m);
    }
  }
  // Build an invertible B whose first four columns are the masks, extended
  // greedily by unit vectors; the CNOT network realizes A = B^{-1}, which
  // maps mask i to the unit vector on qubit i.
  std::vector<std::uint32_t> bcols(y.begin(), y.end());
  {
    std::vector<std::uint32_t> basis;
    for (std::uint32_t m : bcols) {
      for (auto b : basis) m = std::min(m, m ^ b);
      basis.push_back(m);
    }
    for (int q = 0; q < n && static_cast<int>(bcols.size()) < n; ++q) {
      std::uint32_t m = 1u << q;
      for (auto b : basis) m = std::min(m, m ^ b);
      if (m) {
        basis.push_back(m);
        bcols.push_back(1u << q);
      }
    }
    if (static_cast<int>(bcols.size()) < n) return std::nullopt;
  }
  // Rows of B, then invert via Gauss-Jordan to get A's rows.
  std::vector<std::uint64_t> rows(n);  // low n bits: B row, high n bits: A row
  for (int r = 0; r < n; ++r) {
    std::uint64_t br = 0;
    for (int cidx = 0; cidx < n; ++cidx)
      if (bcols[cidx] >> r & 1) br |= std::uint64_t(1) << cidx;
    rows[r] = br | (std::uint64_t(1) << (n + r));
  }
  for (int cidx = 0; cidx < n; ++cidx) {
    int piv = -1;
    for (int r = cidx; r < n; ++r)
      if (rows[r] >> cidx & 1) { piv = r; break; }
    if (piv < 0) return std::nullopt;
    std::swap(rows[cidx], rows[piv]);
    for (int r = 0; r < n; ++r)
      if (r != cidx && (rows[r] >> cidx & 1)) rows[r] ^= rows[cidx];
  }
  std::vector<std::uint32_t> arow(n);
  for (int r = 0; r < n; ++r)
    arow[r] = std::uint32_t(rows[r] >> n);
  // Decompose A into transvections (row_c += row_t) recorded in order; the
  // gate sequence applies them reversed (each is a CNOT(c, t)).
  std::vector<std::pair<int, int>> ops;
  {
    std::vector<std::uint32_t> m = arow;
    for (int cidx = 0; cidx < n; ++cidx) {
      if (!(m[cidx] >> cidx & 1)) {
        // The pivot donor must lie below the diagonal: rows above are already
        // unit vectors and would reintroduce earlier columns.
        int src = -1;
        for (int r = cidx + 1; r < n; ++r)
          if (m[r] >> cidx & 1) { src = r; break; }
        if (src < 0) return std::nullopt;
        m[cidx] ^= m[src];
        ops.emplace_back(cidx, src);
      }
      for (int r = 0; r < n; ++r)
        if (r != cidx && (m[r] >> cidx & 1)) {
          m[r] ^= m[cidx];
          ops.emplace_back(r, cidx);
        }
    }
  }
  Circuit red{n, 0};
  for (auto it = ops.rbegin(); it != ops.rend(); ++it)
    red.push(Gate::cnot(it->first, it->second));

  // Core on qubits 0..3 with all-positive coefficient +mag.
  Circuit core{n, 0};
  for (int i = 0; i < 4; ++i)
    if (v[i] < 0) core.push(Gate::x(i));
  double V = mag;
  // |E| = 4V block: x = 0000 / 1111.
  core.push(Gate::cnot(0, 1));
  core.push(Gate::cnot(0, 2));
  core.push(Gate::cnot(0, 3));
  Gate g1 = Gate::mcrz({1, 2, 3}, 0, -8 * V);
  g1.negated = 7;
  core.push(g1);
  core.push(Gate::cnot(0, 3));
  core.push(Gate::cnot(0, 2));
  core.push(Gate::cnot(0, 1));
  // |E| = 2V block: odd parity, sign by majority(x1,x2,x3).
  int Aq = core.add_ancilla(), Bq = core.add_ancilla();
  core.push(Gate::cnot(3, 1));
  core.push(Gate::cnot(3, 2));
  core.push(Gate::toffoli(1, 2, Aq, 0));
  core.push(Gate::cnot(3, Aq));  // A = majority
  core.push(Gate::cnot(0, Bq));
  core.push(Gate::cnot(1, Bq));
  core.push(Gate::cnot(2, Bq));
  core.push(Gate::cnot(3, Bq));  // B = total parity
  core.push(Gate::crz(Bq, Aq, -4 * V));
  core.push(Gate::cnot(3, Bq));
  core.push(Gate::cnot(2, Bq));
  core.push(Gate::cnot(1, Bq));
  core.push(Gate::cnot(0, Bq));
  core.push(Gate::cnot(3, Aq));
  core.push(Gate::toffoli(1, 2, Aq, 0));
  core.push(Gate::cnot(3, 2));
  core.push(Gate::cnot(3, 1));
  for (int i = 0; i < 4; ++i)
    if (v[i] < 0) core.push(Gate::x(i));

  Circuit mid = concat(red, concat(core, red.dagger()));
  return concat(d.w.dagger(), concat(mid, d.w));
}

}  // namespace

std::optional<TemplateResult> try_template(const Fragment& frag, double t) {
  if (frag.paulis.empty()) return std::nullopt;
  if (!frag.commuting()) return std::nullopt;
  auto ft = flatten(frag);
  if (auto c = t_zpair(frag, ft, t)) return TemplateResult{std::move(*c), "zpair"};
  if (auto c = t_zmatch(frag, ft, t)) return TemplateResult{std::move(*c), "zmatch"};
  if (auto c = t_ring4(frag, ft, t)) return TemplateResult{std::move(*c), "ring4"};
  if (auto c = t_ring6(frag, ft, t)) return TemplateResult{std::move(*c), "ring6"};
  if (auto c = t_excitation(frag, ft, t))
    return TemplateResult{std::move(*c), "excitation"};
  if (auto c = t_indep4(frag, t)) return TemplateResult{std::move(*c), "indep4"};
  return std::nullopt;
}

}  // namespace hamforge
