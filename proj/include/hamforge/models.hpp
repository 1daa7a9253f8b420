// Built-in Hamiltonian generators (Heisenberg / Ising on graphs) and the
// reference groupings with their published per-fragment circuit costs.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hamforge/pauli.hpp"

namespace hamforge {

struct Graph {
  int n_vertices = 0;
  std::vector<std::pair<int, int>> edges;  // unordered, no self-loops/dups
};

Graph cycle_graph(int n);             // n >= 3
Graph complete_graph(int n);          // n >= 2
Graph lattice(int rows, int cols);    // grid graph, rows*cols vertices

// H = sum_{(i,j) in E} (Jx XiXj + Jy YiYj + Jz ZiZj) + sum_i dh Zi.
// Zero couplings are omitted from the term list.
Hamiltonian heisenberg(const Graph& g, double jx, double jy, double jz,
                       double dh);
// H = sum_{(i,j) in E} Jz ZiZj + sum_i di Zi.
Hamiltonian ising(const Graph& g, double jz, double di);

struct GroupRow {
  Fragment fragment;
  long expected_rotations = 0;
  long expected_toffoli_pairs = 0;
};

struct ReferenceGrouping {
  std::string model;
  std::vector<GroupRow> groups;

  std::vector<Fragment> fragments() const;
  // Sum of the groups as a Hamiltonian (for reconstruction checks).
  Hamiltonian to_hamiltonian(int n) const;
};

struct BuiltinModel {
  Hamiltonian hamiltonian;
  ReferenceGrouping grouping;
};

inline constexpr std::uint64_t kDefaultModelSeed = 0x68616d666f726765ULL;

// name in {"H2", "LiH", "heis4", "heis6"}.  The Heisenberg couplings
// (Jx, Jy, Jz, dh) are drawn i.i.d. from a seeded N(0,1).
BuiltinModel builtin(const std::string& name,
                     std::uint64_t seed = kDefaultModelSeed);

}  // namespace hamforge
