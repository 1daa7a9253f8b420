#include "hamforge/models.hpp"

#include <stdexcept>

#include "builtin_data.hpp"
#include "hamforge/rng.hpp"

namespace hamforge {
namespace {

PauliString from_masks(int n, std::uint32_t x, std::uint32_t z) {
  return PauliString{n, x, z, 0}.canonical();
}

void validate(const Graph& g) {
  for (auto [a, b] : g.edges) {
    if (a == b) throw std::invalid_argument("graph: self-loop");
    if (a < 0 || b < 0 || a >= g.n_vertices || b >= g.n_vertices)
      throw std::invalid_argument("graph: vertex out of range");
    int hits = 0;
    for (auto [c, d] : g.edges)
      if ((c == a && d == b) || (c == b && d == a)) ++hits;
    if (hits != 1) throw std::invalid_argument("graph: duplicate edge");
  }
}

Fragment fragment_of(int n, double scale,
                     const std::vector<std::pair<double, std::string>>& rows,
                     std::string label) {
  Fragment f;
  f.n = n;
  f.scale = scale;
  f.label = std::move(label);
  for (const auto& [unit, word] : rows)
    f.paulis.push_back({unit, PauliString::parse(word)});
  return f;
}

ReferenceGrouping h2_grouping() {
  ReferenceGrouping g;
  g.model = "H2";
  auto add = [&](double scale,
                 std::vector<std::pair<double, std::string>> rows,
                 std::string label, long rot, long pairs) {
    g.groups.push_back(
        {fragment_of(4, scale, rows, std::move(label)), rot, pairs});
  };
  add(0.13716572937099503, {{1, "ZIII"}, {1, "IZII"}}, "Z12", 1, 0);
  add(-0.13036292057109106, {{1, "IIZI"}, {1, "IIIZ"}}, "Z34", 1, 0);
  add(0.04919764587136755,
      {{1, "XYYX"}, {1, "YXXY"}, {-1, "YYXX"}, {-1, "XXYY"}}, "exc", 1, 3);
  add(0.00784099595571514, {{1, "IIZZ"}}, "ZZ34-res", 1, 0);
  add(0.00117393410245115, {{1, "ZZII"}}, "ZZ12-res", 1, 0);
  add(0.15542669077992832,
      {{1, "IIZZ"}, {1, "ZZII"}, {1, "ZIIZ"}, {1, "IZZI"}}, "ZZ-ring", 1, 1);
  add(0.10622904490856075, {{1, "IZIZ"}, {1, "ZIZI"}}, "ZZ-match", 1, 2);
  return g;
}

ReferenceGrouping lih_grouping() {
  ReferenceGrouping g;
  g.model = "LiH";
  auto add = [&](double scale,
                 std::vector<std::pair<double, std::string>> rows,
                 std::string label, long rot, long pairs) {
    g.groups.push_back(
        {fragment_of(4, scale, rows, std::move(label)), rot, pairs});
  };
  add(-0.0013743761078958677,
      {{1, "XZXZ"}, {1, "IXIX"}, {1, "IYIY"}, {1, "YZYZ"}}, "L1", 2, 3);
  add(0.002932996440950227,
      {{1, "XYYX"}, {1, "YXXY"}, {-1, "YYXX"}, {-1, "XXYY"}}, "exc", 1, 3);
  add(0.011536413200774975,
      {{1, "ZYZY"}, {1, "XIXI"}, {1, "ZXZX"}, {1, "YIYI"}}, "L3", 2, 3);
  add(0.012910780273117489,
      {{1, "IXZX"}, {1, "IYZY"}, {1, "XZXI"}, {1, "YZYI"}}, "L4", 2, 3);
  add(0.05706344223424907,
      {{1, "IIZZ"}, {1, "ZZII"}, {1, "ZIIZ"}, {1, "IZZI"}}, "ZZ-ring", 1, 1);
  add(0.02773265320246074, {{1, "IIZZ"}}, "ZZ34-res", 1, 0);
  add(0.06738425909712681, {{1, "ZZII"}}, "ZZ12-res", 1, 0);
  add(0.054130445793298836, {{1, "IZIZ"}, {1, "ZIZI"}}, "ZZ-match", 1, 2);
  add(-0.013243698330265952, {{1, "IIZI"}, {1, "IIIZ"}}, "Z34", 1, 0);
  add(0.1619947538800418, {{1, "IZII"}, {1, "ZIII"}}, "Z12", 1, 0);
  return g;
}

BuiltinModel heis_model(int n, std::uint64_t seed) {
  NormalSampler ns(substream(seed, 0x6865));
  double jx = ns(), jy = ns(), jz = ns(), dh = ns();
  Graph g = cycle_graph(n);
  BuiltinModel out;
  out.hamiltonian = heisenberg(g, jx, jy, jz, dh);
  out.grouping.model = "heis" + std::to_string(n);

  long ring_rot = (n == 4) ? 1 : 2;
  long ring_pairs = (n == 4) ? 1 : 3;
  const struct {
    const char* label;
    double j;
    bool use_x, use_z;
  } families[] = {{"XX-ring", jx, true, false},
                  {"YY-ring", jy, true, true},
                  {"ZZ-ring", jz, false, true}};
  for (const auto& fam : families) {
    Fragment f;
    f.n = n;
    f.scale = fam.j;
    f.label = fam.label;
    for (auto [a, b] : g.edges) {
      std::uint32_t m = (1u << a) | (1u << b);
      f.paulis.push_back({1.0, from_masks(n, fam.use_x ? m : 0,
                                          fam.use_z ? m : 0)});
    }
    out.grouping.groups.push_back({std::move(f), ring_rot, ring_pairs});
  }
  for (int i = 0; i < n; ++i) {
    Fragment f;
    f.n = n;
    f.scale = dh;
    f.label = "Z_(i)";
    f.paulis.push_back({1.0, from_masks(n, 0, 1u << i)});
    out.grouping.groups.push_back({std::move(f), 1, 0});
  }
  return out;
}

}  // namespace

Graph cycle_graph(int n) {
  if (n < 3) throw std::invalid_argument("cycle_graph: n must be >= 3");
  Graph g{n, {}};
  for (int i = 0; i < n; ++i) g.edges.push_back({i, (i + 1) % n});
  return g;
}

Graph complete_graph(int n) {
  if (n < 2) throw std::invalid_argument("complete_graph: n must be >= 2");
  Graph g{n, {}};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.edges.push_back({i, j});
  return g;
}

Graph lattice(int rows, int cols) {
  if (rows < 1 || cols < 1 || rows * cols < 2)
    throw std::invalid_argument("lattice: need at least two vertices");
  Graph g{rows * cols, {}};
  auto id = [&](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) g.edges.push_back({id(r, c), id(r, c + 1)});
      if (r + 1 < rows) g.edges.push_back({id(r, c), id(r + 1, c)});
    }
  return g;
}

Hamiltonian heisenberg(const Graph& g, double jx, double jy, double jz,
                       double dh) {
  if (g.n_vertices < 2) throw std::invalid_argument("heisenberg: n must be >= 2");
  if (g.edges.empty()) throw std::invalid_argument("heisenberg: empty graph");
  validate(g);
  const int n = g.n_vertices;
  std::vector<Term> terms;
  for (auto [a, b] : g.edges) {
    std::uint32_t m = (1u << a) | (1u << b);
    if (jx != 0.0) terms.push_back({jx, from_masks(n, m, 0)});
    if (jy != 0.0) terms.push_back({jy, from_masks(n, m, m)});
    if (jz != 0.0) terms.push_back({jz, from_masks(n, 0, m)});
  }
  if (dh != 0.0)
    for (int i = 0; i < n; ++i)
      terms.push_back({dh, from_masks(n, 0, 1u << i)});
  return Hamiltonian::from_terms(n, std::move(terms));
}

Hamiltonian ising(const Graph& g, double jz, double di) {
  if (g.n_vertices < 2) throw std::invalid_argument("ising: n must be >= 2");
  if (g.edges.empty()) throw std::invalid_argument("ising: empty graph");
  validate(g);
  const int n = g.n_vertices;
  std::vector<Term> terms;
  for (auto [a, b] : g.edges) {
    std::uint32_t m = (1u << a) | (1u << b);
    if (jz != 0.0) terms.push_back({jz, from_masks(n, 0, m)});
  }
  if (di != 0.0)
    for (int i = 0; i < n; ++i)
      terms.push_back({di, from_masks(n, 0, 1u << i)});
  return Hamiltonian::from_terms(n, std::move(terms));
}

std::vector<Fragment> ReferenceGrouping::fragments() const {
  std::vector<Fragment> out;
  for (const auto& g : groups) out.push_back(g.fragment);
  return out;
}

Hamiltonian ReferenceGrouping::to_hamiltonian(int n) const {
  std::vector<Term> terms;
  double ident = 0.0;
  for (const auto& g : groups)
    for (const Term& t : g.fragment.paulis) {
      if (t.pauli.is_identity())
        ident += g.fragment.scale * t.coeff;
      else
        terms.push_back({g.fragment.scale * t.coeff, t.pauli});
    }
  return Hamiltonian::from_terms(n, std::move(terms), ident);
}

BuiltinModel builtin(const std::string& name, std::uint64_t seed) {
  if (name == "H2")
    return {Hamiltonian::parse(detail::kH2Data), h2_grouping()};
  if (name == "LiH")
    return {Hamiltonian::parse(detail::kLiHData), lih_grouping()};
  if (name == "heis4") return heis_model(4, seed);
  if (name == "heis6") return heis_model(6, seed);
  throw std::invalid_argument("builtin: unknown model '" + name + "'");
}

}  // namespace hamforge
