#include "hamforge/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hamforge/phase_synth.hpp"

namespace hamforge {
namespace {

bool commutes_with_all(const PauliString& p, const std::vector<Term>& members) {
  for (const Term& t : members)
    if (!p.commutes_with(t.pauli)) return false;
  return true;
}

Fragment make_fragment(const Hamiltonian& h, const std::vector<int>& idx,
                       const std::vector<double>& beta) {
  Fragment f;
  f.n = h.n;
  f.scale = 1.0;
  for (std::size_t i = 0; i < idx.size(); ++i)
    f.paulis.push_back({beta[i], h.terms[idx[i]].pauli});
  return f;
}

}  // namespace

long default_cost(const Fragment& frag) {
  if (frag.paulis.empty()) return 1;
  try {
    return std::max<long>(1, synthesize_exponential(frag, 1.0).cost().rotations);
  } catch (const std::exception&) {
    // Fragments too wide for table-based synthesis: fall back to one rotation
    // per term, the cost of exponentiating each Pauli separately.
    return std::max<long>(1, static_cast<long>(frag.paulis.size()));
  }
}

std::vector<Fragment> partition_commuting(const Hamiltonian& h) {
  std::vector<int> order(h.terms.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(h.terms[a].coeff) > std::abs(h.terms[b].coeff);
  });

  std::vector<Fragment> frags;
  for (int idx : order) {
    const Term& t = h.terms[idx];
    bool placed = false;
    for (Fragment& f : frags) {
      if (commutes_with_all(t.pauli, f.paulis)) {
        f.paulis.push_back(t);
        placed = true;
        break;
      }
    }
    if (!placed) {
      Fragment f;
      f.n = h.n;
      f.scale = 1.0;
      f.paulis.push_back(t);
      frags.push_back(std::move(f));
    }
  }
  for (std::size_t i = 0; i < frags.size(); ++i)
    frags[i].label = "g" + std::to_string(i + 1);
  return frags;
}

Allocation greedy_allocate(const Hamiltonian& h, const CostFn& cost_fn,
                           double eps) {
  if (!(eps > 0.0))
    throw std::invalid_argument("greedy_allocate: eps must be positive");

  const int m = static_cast<int>(h.terms.size());
  Allocation out;
  out.residual.n = h.n;
  out.residual.identity_coeff = h.identity_coeff;
  if (m == 0) return out;

  std::vector<double> alpha(m);
  for (int j = 0; j < m; ++j) alpha[j] = h.terms[j].coeff;
  const double lambda0 =
      std::accumulate(alpha.begin(), alpha.end(), 0.0,
                      [](double s, double a) { return s + std::abs(a); });
  if (lambda0 == 0.0) {
    out.residual.terms = h.terms;
    return out;
  }
  // Coefficients within this floor of zero are absorbed into the winning
  // allocation so the fragments + residual reconstruct H exactly.
  const double floor_abs = 1e-15 * lambda0;
  const double cmp_tol = 1e-12 * std::max(1.0, lambda0);

  // The single-largest-term candidate guarantees a 1-norm reduction of at
  // least lambda/m per iteration, so the loop terminates within
  // ceil(log(eps)/log(1-1/m)) iterations (plus slack for rounding).
  long max_iters = 1;
  if (m > 1)
    max_iters = static_cast<long>(
                    std::ceil(std::log(eps) / std::log(1.0 - 1.0 / m))) +
                2;

  struct Cand {
    std::vector<int> idx;
    std::vector<double> beta;
    double red = 0.0;
    long cost = 0;
    double ratio = 0.0;
  };

  double lam = lambda0;
  int iteration = 0;
  while (lam > eps * lambda0 && lam > floor_abs && iteration < max_iters + m) {
    ++iteration;

    // Chain: start from the largest remaining coefficient and repeatedly
    // append the largest remaining term commuting with every chain member.
    std::vector<int> chain;
    std::vector<char> used(m, 0);
    std::vector<Term> chain_terms;
    while (true) {
      int best = -1;
      for (int j = 0; j < m; ++j) {
        if (used[j] || alpha[j] == 0.0) continue;
        if (!commutes_with_all(h.terms[j].pauli, chain_terms)) continue;
        if (best < 0 || std::abs(alpha[j]) > std::abs(alpha[best])) best = j;
      }
      if (best < 0) break;
      chain.push_back(best);
      used[best] = 1;
      chain_terms.push_back(h.terms[best]);
    }
    if (chain.empty()) break;  // unreachable while lam > floor_abs

    Cand winner;
    bool have_winner = false;
    auto consider = [&](Cand c) {
      if (c.cost <= 0)
        throw std::runtime_error(
            "greedy_allocate: cost function returned a non-positive cost");
      c.ratio = c.red / static_cast<double>(c.cost);
      bool better = false;
      if (!have_winner) {
        better = true;
      } else if (c.ratio > winner.ratio + cmp_tol) {
        better = true;
      } else if (c.ratio > winner.ratio - cmp_tol) {
        if (c.red > winner.red + cmp_tol)
          better = true;
        else if (c.red > winner.red - cmp_tol && c.cost < winner.cost)
          better = true;
      }
      if (better) {
        winner = std::move(c);
        have_winner = true;
      }
    };

    // (a)/(b): uniform allocation Gamma * sign(alpha'_j) over each chain
    // prefix, with Gamma the smallest prefix magnitude (the i = 1 prefix is
    // the full allocation of the single largest term).
    double gamma = std::abs(alpha[chain[0]]);
    for (std::size_t i = 1; i <= chain.size(); ++i) {
      gamma = std::min(gamma, std::abs(alpha[chain[i - 1]]));
      Cand c;
      c.idx.assign(chain.begin(), chain.begin() + i);
      for (int j : c.idx)
        c.beta.push_back(alpha[j] >= 0.0 ? gamma : -gamma);
      c.red = gamma * static_cast<double>(i);
      c.cost = cost_fn(make_fragment(h, c.idx, c.beta));
      consider(std::move(c));
    }

    // (c): full allocation of a prefix whose exact coefficients match a
    // template pattern (excitation h-parameter solve, ring, Z-pair, ...).
    for (std::size_t i = 2; i <= chain.size() && i <= 8; ++i) {
      Cand c;
      c.idx.assign(chain.begin(), chain.begin() + i);
      double red = 0.0;
      for (int j : c.idx) {
        c.beta.push_back(alpha[j]);
        red += std::abs(alpha[j]);
      }
      Fragment frag = make_fragment(h, c.idx, c.beta);
      if (!try_template(frag, 1.0)) continue;
      c.red = red;
      c.cost = cost_fn(frag);
      consider(std::move(c));
    }

    // Absorb near-zero leftovers into the allocation, then subtract.
    for (std::size_t i = 0; i < winner.idx.size(); ++i) {
      int j = winner.idx[i];
      if (std::abs(alpha[j] - winner.beta[i]) <= floor_abs)
        winner.beta[i] = alpha[j];
      alpha[j] -= winner.beta[i];
    }

    Fragment frag = make_fragment(h, winner.idx, winner.beta);
    frag.label = "a" + std::to_string(iteration);
    out.fragments.push_back(std::move(frag));
    out.trace.push_back({iteration, lam, winner.ratio, winner.cost});

    lam = std::accumulate(alpha.begin(), alpha.end(), 0.0,
                          [](double s, double a) { return s + std::abs(a); });
  }

  for (int j = 0; j < m; ++j)
    if (alpha[j] != 0.0) out.residual.terms.push_back({alpha[j], h.terms[j].pauli});
  return out;
}

Allocation greedy_allocate(const Hamiltonian& h, double eps) {
  return greedy_allocate(h, &default_cost, eps);
}

std::pair<Hamiltonian, double> truncate(const Hamiltonian& h,
                                        double delta_cut) {
  if (delta_cut < 0.0)
    throw std::invalid_argument("truncate: delta_cut must be non-negative");
  Hamiltonian out;
  out.n = h.n;
  out.identity_coeff = h.identity_coeff;
  double delta = 0.0;
  for (const Term& t : h.terms) {
    if (std::abs(t.coeff) < delta_cut)
      delta += std::abs(t.coeff);
    else
      out.terms.push_back(t);
  }
  return {std::move(out), delta};
}

}  // namespace hamforge
