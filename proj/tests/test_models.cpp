#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <stdexcept>

#include "hamforge/models.hpp"
#include "hamforge/phase_synth.hpp"

using namespace hamforge;

namespace {

std::map<std::pair<std::uint32_t, std::uint32_t>, double> term_map(
    const Hamiltonian& h) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> m;
  for (const Term& t : h.terms) m[{t.pauli.x, t.pauli.z}] += t.coeff;
  return m;
}

void check_reconstruction(const BuiltinModel& model) {
  Hamiltonian rebuilt = model.grouping.to_hamiltonian(model.hamiltonian.n);
  auto a = term_map(model.hamiltonian);
  auto b = term_map(rebuilt);
  REQUIRE(a.size() == b.size());
  for (const auto& [k, v] : a) {
    REQUIRE(b.count(k) == 1);
    CHECK(std::abs(b[k] - v) < 1e-12);
  }
}

void check_golden_costs(const BuiltinModel& model) {
  for (const auto& row : model.grouping.groups) {
    CAPTURE(row.fragment.label);
    Circuit c = synthesize_exponential(row.fragment, 1.0);
    auto cost = c.cost();
    CHECK(cost.rotations == row.expected_rotations);
    CHECK(cost.toffoli_pairs == row.expected_toffoli_pairs);
  }
}

}  // namespace

TEST_CASE("graph constructors") {
  Graph c4 = cycle_graph(4);
  REQUIRE(c4.n_vertices == 4);
  REQUIRE(c4.edges.size() == 4);
  CHECK(c4.edges[0] == std::pair<int, int>{0, 1});
  CHECK(c4.edges[3] == std::pair<int, int>{3, 0});

  CHECK(complete_graph(3).edges.size() == 3);
  CHECK(complete_graph(5).edges.size() == 10);
  CHECK(lattice(2, 2).edges.size() == 4);
  CHECK(lattice(3, 3).edges.size() == 12);  // 2*N*(N-1) for N=3

  CHECK_THROWS_AS(cycle_graph(2), std::invalid_argument);
  CHECK_THROWS_AS(complete_graph(1), std::invalid_argument);
  CHECK_THROWS_AS(lattice(1, 1), std::invalid_argument);
}

TEST_CASE("heisenberg generator") {
  Hamiltonian h = heisenberg(cycle_graph(4), 1, 1, 1, 0);
  CHECK(h.terms.size() == 12);  // XX/YY/ZZ per edge, no singles

  Graph path2{2, {{0, 1}}};
  Hamiltonian p = heisenberg(path2, 0.5, 0.5, 0.5, 0.25);
  CHECK(p.terms.size() == 5);  // XX+YY+ZZ plus two Z singles

  Hamiltonian h6 = heisenberg(cycle_graph(6), 0.3, -0.7, 1.1, 0.2);
  int two_qubit = 0, single = 0;
  for (const Term& t : h6.terms) {
    std::uint32_t sup = t.pauli.x | t.pauli.z;
    if (__builtin_popcount(sup) == 2) ++two_qubit;
    if (__builtin_popcount(sup) == 1) ++single;
  }
  CHECK(two_qubit == 18);
  CHECK(single == 6);

  Graph empty{3, {}};
  CHECK_THROWS_AS(heisenberg(empty, 1, 1, 1, 0), std::invalid_argument);
  Graph loop{3, {{0, 0}}};
  CHECK_THROWS_AS(heisenberg(loop, 1, 1, 1, 0), std::invalid_argument);
}

TEST_CASE("ising generator") {
  Hamiltonian tri = ising(complete_graph(3), 0.8, -0.3);
  CHECK(tri.terms.size() == 6);  // 3 ZZ + 3 Z
  for (const Term& t : tri.terms) CHECK(t.pauli.x == 0);

  Hamiltonian field = ising(cycle_graph(4), 0.0, 0.7);
  CHECK(field.terms.size() == 4);
  for (const Term& t : field.terms)
    CHECK(__builtin_popcount(t.pauli.z) == 1);
}

TEST_CASE("builtin H2 model") {
  BuiltinModel m = builtin("H2");
  CHECK(m.hamiltonian.n == 4);
  CHECK(m.hamiltonian.terms.size() == 14);
  CHECK(m.hamiltonian.identity_coeff == Catch::Approx(-0.3276081896748093));
  REQUIRE(m.grouping.groups.size() == 7);
  check_reconstruction(m);
  check_golden_costs(m);

  // The double-excitation group: coefficient 0.0491..., costs (1, 3).
  const GroupRow* exc = nullptr;
  for (const auto& g : m.grouping.groups)
    if (g.fragment.label == "exc") exc = &g;
  REQUIRE(exc != nullptr);
  CHECK(exc->fragment.scale == Catch::Approx(0.0491976458713).epsilon(1e-9));
  CHECK(exc->expected_rotations == 1);
  CHECK(exc->expected_toffoli_pairs == 3);
}

TEST_CASE("builtin LiH model") {
  BuiltinModel m = builtin("LiH");
  CHECK(m.hamiltonian.n == 4);
  CHECK(m.hamiltonian.identity_coeff == Catch::Approx(-7.498946902010707));
  REQUIRE(m.grouping.groups.size() == 10);
  check_reconstruction(m);
  check_golden_costs(m);

  const GroupRow* match = nullptr;
  for (const auto& g : m.grouping.groups)
    if (g.fragment.label == "ZZ-match") match = &g;
  REQUIRE(match != nullptr);
  CHECK(match->fragment.scale == Catch::Approx(0.0541304457932).epsilon(1e-9));
  CHECK(match->expected_rotations == 1);
  CHECK(match->expected_toffoli_pairs == 2);
}

TEST_CASE("builtin Heisenberg models") {
  for (int n : {4, 6}) {
    BuiltinModel m = builtin("heis" + std::to_string(n), 7);
    CHECK(m.hamiltonian.n == n);
    CHECK(m.hamiltonian.terms.size() == static_cast<std::size_t>(4 * n));
    REQUIRE(m.grouping.groups.size() == static_cast<std::size_t>(3 + n));
    check_reconstruction(m);
    check_golden_costs(m);

    long ring_rot = (n == 4) ? 1 : 2;
    long ring_pairs = (n == 4) ? 1 : 3;
    for (int i = 0; i < 3; ++i) {
      CHECK(m.grouping.groups[i].expected_rotations == ring_rot);
      CHECK(m.grouping.groups[i].expected_toffoli_pairs == ring_pairs);
      CHECK(m.grouping.groups[i].fragment.paulis.size() ==
            static_cast<std::size_t>(n));
    }
    for (int i = 3; i < 3 + n; ++i) {
      CHECK(m.grouping.groups[i].expected_rotations == 1);
      CHECK(m.grouping.groups[i].expected_toffoli_pairs == 0);
    }
  }
}

TEST_CASE("builtin Heisenberg coefficients are seeded and reproducible") {
  BuiltinModel a = builtin("heis4", 11);
  BuiltinModel b = builtin("heis4", 11);
  BuiltinModel c = builtin("heis4", 12);
  REQUIRE(a.hamiltonian.terms.size() == b.hamiltonian.terms.size());
  bool any_diff = false;
  for (std::size_t i = 0; i < a.hamiltonian.terms.size(); ++i) {
    CHECK(a.hamiltonian.terms[i].coeff == b.hamiltonian.terms[i].coeff);
    any_diff |= (a.hamiltonian.terms[i].coeff != c.hamiltonian.terms[i].coeff);
  }
  CHECK(any_diff);

  // Couplings look like N(0,1) draws: finite, not all equal.
  double jx = a.grouping.groups[0].fragment.scale;
  double jy = a.grouping.groups[1].fragment.scale;
  CHECK(std::isfinite(jx));
  CHECK(jx != jy);
}

TEST_CASE("builtin rejects unknown names") {
  CHECK_THROWS_AS(builtin("He3"), std::invalid_argument);
}
