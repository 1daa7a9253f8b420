// Commuting partition, greedy 1-norm allocation and truncation.
#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "hamforge/pauli.hpp"

namespace hamforge {

struct AllocationTraceRow {
  int iteration = 0;
  double one_norm_before = 0;
  double gamma_max = 0;  // winning reduction/cost ratio
  long cost = 0;
};

struct Allocation {
  std::vector<Fragment> fragments;
  Hamiltonian residual;
  std::vector<AllocationTraceRow> trace;
};

using CostFn = std::function<long(const Fragment&)>;

// Rotation count of the synthesized circuit for the fragment (minimum 1).
long default_cost(const Fragment& frag);

// Greedy sequential coloring: terms sorted by |coeff| descending, each term
// joins the first fragment it commutes with entirely, else opens a new one.
std::vector<Fragment> partition_commuting(const Hamiltonian& h);

// Algorithm: repeatedly build a commuting chain by largest remaining
// coefficient, evaluate the beta-candidate set (single largest term; uniform
// prefix allocations; exact template-pattern allocations), allocate the
// candidate with the best reduction/cost ratio, and subtract it.  Stops when
// the remaining 1-norm drops to eps times the original.
Allocation greedy_allocate(const Hamiltonian& h, const CostFn& cost_fn,
                           double eps);
Allocation greedy_allocate(const Hamiltonian& h, double eps);

// Drop terms with |coeff| < delta_cut; returns the truncated Hamiltonian and
// the 1-norm of the dropped coefficients.
std::pair<Hamiltonian, double> truncate(const Hamiltonian& h,
                                        double delta_cut);

}  // namespace hamforge
