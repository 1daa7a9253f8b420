#include "hamforge/phase_synth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace hamforge {

namespace {

constexpr double kSnapTol = 1e-12;

// Implicant over n variables: bit q of `fixed` set means qubit q is a
// literal with value bit q of `val`; clear means don't-care.
struct Implicant {
  std::uint32_t fixed = 0;
  std::uint32_t val = 0;
  bool operator<(const Implicant& o) const {
    return std::tie(fixed, val) < std::tie(o.fixed, o.val);
  }
  bool matches(std::uint32_t xm) const { return (xm & fixed) == val; }
};

std::string implicant_string(const Implicant& imp, int n) {
  std::string s(n, '*');
  for (int q = 0; q < n; ++q)
    if (imp.fixed >> q & 1) s[q] = (imp.val >> q & 1) ? '1' : '0';
  return s;
}

Implicant parse_implicant(const std::string& s) {
  Implicant imp;
  for (int q = 0; q < static_cast<int>(s.size()); ++q) {
    if (s[q] == '*') continue;
    if (s[q] != '0' && s[q] != '1')
      throw std::invalid_argument("bad minterm character '" +
                                  std::string(1, s[q]) + "'");
    imp.fixed |= 1u << q;
    if (s[q] == '1') imp.val |= 1u << q;
  }
  return imp;
}

// All prime implicants of the set S (Quine-McCluskey merge step).
std::vector<Implicant> prime_implicants(const std::set<std::uint32_t>& S,
                                        int n) {
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  std::set<Implicant> level;
  for (std::uint32_t m : S) level.insert({full, m});
  std::vector<Implicant> primes;
  while (!level.empty()) {
    std::set<Implicant> next;
    std::set<Implicant> merged;
    std::vector<Implicant> cur(level.begin(), level.end());
    for (size_t i = 0; i < cur.size(); ++i)
      for (size_t j = i + 1; j < cur.size(); ++j) {
        if (cur[i].fixed != cur[j].fixed) continue;
        std::uint32_t d = cur[i].val ^ cur[j].val;
        if (std::popcount(d) != 1) continue;
        next.insert({cur[i].fixed & ~d, cur[i].val & ~d});
        merged.insert(cur[i]);
        merged.insert(cur[j]);
      }
    for (const auto& imp : cur)
      if (!merged.count(imp)) primes.push_back(imp);
    level = std::move(next);
  }
  std::sort(primes.begin(), primes.end());
  return primes;
}

// Deterministic disjoint exact cover: repeatedly take the largest prime
// implicant of the still-uncovered set (ties by lexicographic order), so the
// selected implicants are pairwise disjoint and expand exactly to the set.
std::vector<Implicant> disjoint_cover(std::set<std::uint32_t> remaining,
                                      int n) {
  std::vector<Implicant> out;
  while (!remaining.empty()) {
    auto primes = prime_implicants(remaining, n);
    const Implicant* best = nullptr;
    for (const auto& p : primes)
      if (!best || std::popcount(p.fixed) < std::popcount(best->fixed))
        best = &p;
    out.push_back(*best);
    for (auto it = remaining.begin(); it != remaining.end();)
      it = best->matches(*it) ? remaining.erase(it) : std::next(it);
  }
  return out;
}

std::set<std::uint32_t> expand_minterms(const std::vector<std::string>& strs,
                                        int* n_out) {
  std::set<std::uint32_t> S;
  int n = 0;
  for (const auto& s : strs) {
    if (n == 0) n = static_cast<int>(s.size());
    if (static_cast<int>(s.size()) != n)
      throw std::invalid_argument("minterm width mismatch");
    Implicant imp = parse_implicant(s);
    std::uint32_t stars = ((n == 32) ? ~0u : ((1u << n) - 1)) & ~imp.fixed;
    // enumerate subsets of the star mask
    std::uint32_t sub = 0;
    do {
      S.insert(imp.val | sub);
      sub = (sub - stars) & stars;
    } while (sub != 0);
  }
  if (n_out) *n_out = n;
  return S;
}

// Count distinct nonzero magnitudes of {v - c : v in vals} with relative
// bucketing tolerance.
int count_magnitudes(const std::vector<double>& vals, double c, double tol) {
  std::vector<double> mags;
  for (double v : vals) {
    double m = std::abs(v - c);
    if (m > tol) mags.push_back(m);
  }
  std::sort(mags.begin(), mags.end());
  int count = 0;
  double last = -1;
  for (double m : mags) {
    if (count == 0 || m - last > tol * std::max(1.0, m)) ++count;
    last = m;
  }
  return count;
}

}  // namespace

PhaseTable phase_table(
    const std::vector<std::tuple<double, std::uint32_t, int>>& zterms, int n) {
  if (n < 1 || n > kMaxQubits)
    throw std::invalid_argument("phase_table: qubit count out of range");
  PhaseTable pt;
  pt.n = n;
  pt.phi.assign(std::size_t(1) << n, 0.0);
  for (std::uint32_t xm = 0; xm < pt.phi.size(); ++xm) {
    double acc = 0;
    for (const auto& [value, y, sign] : zterms)
      acc += value * sign * ((std::popcount(y & xm) & 1) ? -1.0 : 1.0);
    pt.phi[xm] = std::abs(acc) < kSnapTol ? 0.0 : acc;
  }
  return pt;
}

PhaseTable phase_table(const Diagonalization& d, double t) {
  std::vector<std::tuple<double, std::uint32_t, int>> zt;
  for (const auto& [coeff, zs] : d.zterms)
    zt.emplace_back(coeff * t, zs.z_mask, zs.sign);
  return phase_table(zt, d.n);
}

std::vector<MintermCover> distinct_magnitudes(PhaseTable& pt) {
  const auto& vals = pt.phi;
  double maxabs = 0;
  for (double v : vals) maxabs = std::max(maxabs, std::abs(v));
  const double tol = 1e-9 * std::max(1.0, maxabs);

  // Distinct values (bucketed).
  std::vector<double> distinct;
  {
    std::vector<double> sorted = vals;
    std::sort(sorted.begin(), sorted.end());
    for (double v : sorted)
      if (distinct.empty() || v - distinct.back() > tol) distinct.push_back(v);
  }
  // Candidate global-phase offsets: 0, each distinct value, all pairwise
  // midpoints.  Capped for large tables, where an offset rarely helps.
  std::vector<double> candidates = {0.0};
  if (distinct.size() <= 64) {
    for (double v : distinct) candidates.push_back(v);
    for (size_t i = 0; i < distinct.size(); ++i)
      for (size_t j = i + 1; j < distinct.size(); ++j)
        candidates.push_back(0.5 * (distinct[i] + distinct[j]));
  }
  double best_c = 0.0;
  int best_count = count_magnitudes(vals, 0.0, tol);
  for (double c : candidates) {
    int cnt = count_magnitudes(vals, c, tol);
    if (cnt < best_count ||
        (cnt == best_count && std::abs(c) < std::abs(best_c) - tol))
      { best_count = cnt; best_c = c; }
  }
  pt.offset = best_c;

  // Bucket assignments by |phi - offset|.
  struct Bucket {
    double mag_sum = 0;
    int mag_n = 0;
    std::vector<std::uint32_t> pos, neg;
  };
  std::vector<std::pair<double, Bucket>> buckets;  // keyed by representative
  for (std::uint32_t xm = 0; xm < vals.size(); ++xm) {
    double d = vals[xm] - best_c;
    double m = std::abs(d);
    if (m <= tol) continue;
    Bucket* b = nullptr;
    for (auto& [rep, bk] : buckets)
      if (std::abs(rep - m) <= tol * std::max(1.0, m)) { b = &bk; break; }
    if (!b) {
      buckets.emplace_back(m, Bucket{});
      b = &buckets.back().second;
    }
    b->mag_sum += m;
    b->mag_n += 1;
    (d > 0 ? b->pos : b->neg).push_back(xm);
  }
  std::sort(buckets.begin(), buckets.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<MintermCover> covers;
  for (auto& [rep, bk] : buckets) {
    MintermCover c;
    c.theta = bk.mag_sum / bk.mag_n;
    for (std::uint32_t xm : bk.pos)
      c.pos.push_back(implicant_string(
          {(pt.n == 32) ? ~0u : ((1u << pt.n) - 1), xm}, pt.n));
    for (std::uint32_t xm : bk.neg)
      c.neg.push_back(implicant_string(
          {(pt.n == 32) ? ~0u : ((1u << pt.n) - 1), xm}, pt.n));
    covers.push_back(std::move(c));
  }
  return covers;
}

MintermCover compress_minterms(const MintermCover& cover) {
  MintermCover out;
  out.theta = cover.theta;
  for (auto* side : {&cover.pos, &cover.neg}) {
    if (side->empty()) continue;
    int n = 0;
    auto S = expand_minterms(*side, &n);
    std::vector<std::string> strs;
    for (const auto& imp : disjoint_cover(std::move(S), n))
      strs.push_back(implicant_string(imp, n));
    (side == &cover.pos ? out.pos : out.neg) = std::move(strs);
  }
  return out;
}

namespace {

// Stateful circuit builder with a pair-id counter.
struct Builder {
  Circuit c;
  int next_pair = 0;
  explicit Builder(int n) : c{n, 0} {}
};

struct Literal {
  int qubit;
  bool value;
};

std::vector<Literal> implicant_literals(const Implicant& imp, int n) {
  std::vector<Literal> lits;
  for (int q = 0; q < n; ++q)
    if (imp.fixed >> q & 1) lits.push_back({q, bool(imp.val >> q & 1)});
  return lits;
}

// Toggle `anc` by the implicant's indicator.  Pushes the compute gates and
// appends them (in reverse) to `undo` for the later mirrored uncompute.
// Wide conjunctions use a monolithic MCX so the routed circuit never needs
// more than the two dedicated routing ancillae.
void route_implicant(Builder& b, const std::vector<Literal>& lits, int anc,
                     std::vector<Gate>& undo) {
  std::vector<Gate> emitted;
  auto put = [&](Gate g) {
    b.c.push(g);
    emitted.push_back(std::move(g));
  };
  const int k = static_cast<int>(lits.size());
  if (k == 0) {
    put(Gate::x(anc));
  } else if (k == 1) {
    if (!lits[0].value) put(Gate::x(lits[0].qubit));
    put(Gate::cnot(lits[0].qubit, anc));
    if (!lits[0].value) put(Gate::x(lits[0].qubit));
  } else if (k == 2) {
    Gate g = Gate::toffoli(lits[0].qubit, lits[1].qubit, anc, b.next_pair++);
    g.negated = (lits[0].value ? 0u : 1u) | (lits[1].value ? 0u : 2u);
    put(g);
  } else {
    std::vector<int> ctrls;
    std::uint32_t negm = 0;
    for (int i = 0; i < k; ++i) {
      ctrls.push_back(lits[i].qubit);
      if (!lits[i].value) negm |= 1u << i;
    }
    Gate g = Gate::mcx(ctrls, anc);
    g.negated = negm;
    put(g);
  }
  undo.insert(undo.end(), emitted.rbegin(), emitted.rend());
}

struct ParsedCover {
  double theta;
  std::vector<std::vector<Literal>> pos, neg;
};

ParsedCover parse_cover(const MintermCover& cov, int n) {
  ParsedCover p;
  p.theta = cov.theta;
  for (const auto& s : cov.pos)
    p.pos.push_back(implicant_literals(parse_implicant(s), n));
  for (const auto& s : cov.neg)
    p.neg.push_back(implicant_literals(parse_implicant(s), n));
  return p;
}

// Emit one cover in the two-ancilla routing scheme: pos assignments pick up
// e^{+i theta}, neg assignments e^{-i theta}, exactly one CRz.
void emit_cover(Builder& b, const ParsedCover& cov, int A, int B) {
  std::vector<Gate> undo;
  for (const auto& lits : cov.pos) route_implicant(b, lits, A, undo);
  for (const auto& lits : cov.neg) route_implicant(b, lits, B, undo);
  const bool has_pos = !cov.pos.empty(), has_neg = !cov.neg.empty();
  if (has_pos && has_neg) b.c.push(Gate::cnot(B, A));
  int ctl = has_pos ? A : B;
  int tgt = has_pos ? B : A;  // rotation target ancilla stays |0> or holds neg
  // ctl=1, tgt=0 on pos states -> e^{-i angle/2}; ctl=tgt=1 on neg states.
  b.c.push(Gate::crz(ctl, tgt, has_pos ? -2 * cov.theta : +2 * cov.theta));
  if (has_pos && has_neg) b.c.push(Gate::cnot(B, A));
  for (const auto& g : undo) b.c.push(g);
}

// Parity special case: a single cover whose pos/neg sets partition the whole
// cube by the parity of some mask y; returns the mask and the parity of pos.
struct ParityForm {
  std::uint32_t y;
  int pos_parity;
};
std::optional<ParityForm> detect_parity(const ParsedCover& cov, int n,
                                        const MintermCover& raw) {
  if (n > kMaxQubits) return std::nullopt;
  std::vector<Implicant> pos, neg;
  for (const auto& s : raw.pos) pos.push_back(parse_implicant(s));
  for (const auto& s : raw.neg) neg.push_back(parse_implicant(s));
  auto side = [&](std::uint32_t xm) -> int {
    for (const auto& i : pos)
      if (i.matches(xm)) return +1;
    for (const auto& i : neg)
      if (i.matches(xm)) return -1;
    return 0;
  };
  const std::uint64_t size = std::uint64_t(1) << n;
  int s0 = side(0);
  if (s0 == 0) return std::nullopt;
  std::uint32_t y = 0;
  for (int q = 0; q < n; ++q) {
    int sq = side(1u << q);
    if (sq == 0) return std::nullopt;
    if (sq != s0) y |= 1u << q;
  }
  if (y == 0) return std::nullopt;
  for (std::uint64_t xm = 0; xm < size; ++xm) {
    int expect = (std::popcount(y & std::uint32_t(xm)) & 1) ? -s0 : s0;
    if (side(std::uint32_t(xm)) != expect) return std::nullopt;
  }
  return ParityForm{y, s0 > 0 ? 0 : 1};
}

void emit_parity_ladder(Circuit& c, std::uint32_t y, double angle_on_even) {
  // CNOT ladder along the bits of y; Rz on the last bit; unwind.
  std::vector<int> bits;
  for (int q = 0; q < c.n_system; ++q)
    if (y >> q & 1) bits.push_back(q);
  for (size_t i = 0; i + 1 < bits.size(); ++i)
    c.push(Gate::cnot(bits[i], bits[i + 1]));
  c.push(Gate::rz(bits.back(), angle_on_even));
  for (size_t i = bits.size() - 1; i-- > 0;)
    c.push(Gate::cnot(bits[i], bits[i + 1]));
}

}  // namespace

Circuit synthesize_phase_circuit(const std::vector<MintermCover>& covers,
                                 int n) {
  Builder b(n);
  if (covers.empty()) return b.c;
  if (covers.size() == 1) {
    auto parsed = parse_cover(covers[0], n);
    if (auto pf = detect_parity(parsed, n, covers[0])) {
      // Phase e^{+i theta} where parity == pos_parity.
      double a = (pf->pos_parity == 0) ? -2 * covers[0].theta
                                       : +2 * covers[0].theta;
      emit_parity_ladder(b.c, pf->y, a);
      return b.c;
    }
  }
  int A = b.c.add_ancilla();
  int B = b.c.add_ancilla();
  for (const auto& cov : covers) emit_cover(b, parse_cover(cov, n), A, B);
  return b.c;
}

namespace {

// GF(2) solve of Y u = 1 (one equation per mask); returns any solution.
std::optional<std::uint32_t> solve_common_parity(
    const std::vector<std::uint32_t>& masks, int n) {
  std::vector<std::pair<std::uint32_t, int>> rows;  // (mask, rhs), reduced
  for (std::uint32_t m : masks) {
    int rhs = 1;
    for (const auto& [rm, rr] : rows) {
      std::uint32_t piv = rm & ~(rm - 1);  // lowest set bit
      if (m & piv) {
        m ^= rm;
        rhs ^= rr;
      }
    }
    if (m == 0) {
      if (rhs == 1) return std::nullopt;
      continue;
    }
    rows.emplace_back(m, rhs);
  }
  std::uint32_t u = 0;
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    auto [m, rhs] = *it;
    std::uint32_t piv = m & ~(m - 1);
    if ((std::popcount(m & u) & 1) != rhs) u ^= piv;
  }
  (void)n;
  return u;
}

// Diagonal phase section applying e^{i phi(x)} with
// phi(x) = sum_i value_i (-1)^{y_i . x}.
Circuit phase_section(std::vector<std::pair<double, std::uint32_t>> zt,
                      int n) {
  // Merge duplicate masks, drop negligible terms and the constant term.
  std::map<std::uint32_t, double> merged;
  double maxval = 0;
  for (auto& [v, y] : zt) merged[y] += v;
  for (auto& [y, v] : merged) maxval = std::max(maxval, std::abs(v));
  std::vector<std::pair<double, std::uint32_t>> terms;
  for (auto& [y, v] : merged)
    if (y != 0 && std::abs(v) > kSnapTol * std::max(1.0, maxval))
      terms.emplace_back(v, y);

  Circuit empty{n, 0};
  if (terms.empty()) return empty;
  if (terms.size() == 1) {
    auto [v, y] = terms[0];
    Circuit c{n, 0};
    emit_parity_ladder(c, y, -2 * v);  // even parity picks up e^{+iv}
    return c;
  }

  std::vector<std::uint32_t> masks;
  for (auto& [v, y] : terms) masks.push_back(y);

  if (auto u = solve_common_parity(masks, n)) {
    // Antisymmetric path: CNOT pre-pass makes every mask contain qubit b,
    // then phi(x) = (-1)^{x_b} phi'(rest), so rotations can target b.
    int b_q = std::countr_zero(*u);
    Builder bld(n);
    std::vector<int> pre;
    for (int j = 0; j < n; ++j)
      if (j != b_q && (*u >> j & 1)) pre.push_back(j);
    for (int j : pre) bld.c.push(Gate::cnot(b_q, j));
    // Transformed masks; strip qubit b and renumber the remaining qubits.
    std::vector<int> rest;
    for (int q = 0; q < n; ++q)
      if (q != b_q) rest.push_back(q);
    const int m = n - 1;
    std::vector<std::pair<double, std::uint32_t>> red;
    for (auto& [v, y] : terms) {
      std::uint32_t y2 = y;
      for (int j : pre)
        if (y >> j & 1) y2 ^= 1u << b_q;
      std::uint32_t yr = 0;
      for (int i = 0; i < m; ++i)
        if (y2 >> rest[i] & 1) yr |= 1u << i;
      red.emplace_back(v, yr);
    }
    // Reduced phase table over the remaining qubits (x_b = 0 sheet).
    PhaseTable pt;
    pt.n = m;
    pt.phi.assign(std::size_t(1) << m, 0.0);
    for (std::uint32_t xm = 0; xm < pt.phi.size(); ++xm) {
      double acc = 0;
      for (auto& [v, yr] : red)
        acc += v * ((std::popcount(yr & xm) & 1) ? -1.0 : 1.0);
      pt.phi[xm] = acc;
    }
    // No offset here: an offset would break the antisymmetry in x_b.
    double maxabs = 0;
    for (double v : pt.phi) maxabs = std::max(maxabs, std::abs(v));
    const double tol = 1e-9 * std::max(1.0, maxabs);
    std::vector<std::pair<double, std::pair<std::set<std::uint32_t>,
                                            std::set<std::uint32_t>>>> buckets;
    for (std::uint32_t xm = 0; xm < pt.phi.size(); ++xm) {
      double v = pt.phi[xm], mag = std::abs(v);
      if (mag <= tol) continue;
      decltype(buckets)::value_type* bk = nullptr;
      for (auto& entry : buckets)
        if (std::abs(entry.first - mag) <= tol * std::max(1.0, mag)) {
          bk = &entry;
          break;
        }
      if (!bk) {
        buckets.push_back({mag, {}});
        bk = &buckets.back();
      }
      (v > 0 ? bk->second.first : bk->second.second).insert(xm);
    }
    std::sort(buckets.begin(), buckets.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    int A = -1, B = -1;  // routing ancillae, allocated on first use
    for (auto& [theta, sides] : buckets) {
      auto pos = disjoint_cover(std::move(sides.first), m);
      auto neg = disjoint_cover(std::move(sides.second), m);
      auto to_orig = [&](const Implicant& imp) {
        std::vector<Literal> lits;
        for (int i = 0; i < m; ++i)
          if (imp.fixed >> i & 1) lits.push_back({rest[i], bool(imp.val >> i & 1)});
        return lits;
      };
      if (pos.size() + neg.size() == 1) {
        bool is_pos = !pos.empty();
        auto lits = to_orig(is_pos ? pos[0] : neg[0]);
        double a = is_pos ? -2 * theta : +2 * theta;  // x_b=0 gets e^{+-i theta}
        if (lits.empty()) {
          bld.c.push(Gate::rz(b_q, a));
        } else {
          std::vector<int> ctrls;
          std::uint32_t negm = 0;
          for (size_t i = 0; i < lits.size(); ++i) {
            ctrls.push_back(lits[i].qubit);
            if (!lits[i].value) negm |= 1u << i;
          }
          Gate g = Gate::mcrz(ctrls, b_q, a);
          g.negated = negm;
          bld.c.push(g);
        }
        continue;
      }
      if (A < 0) { A = bld.c.add_ancilla(); B = bld.c.add_ancilla(); }
      std::vector<Gate> undo;
      for (const auto& imp : pos)
        route_implicant(bld, to_orig(imp), A, undo);
      for (const auto& imp : neg)
        route_implicant(bld, to_orig(imp), B, undo);
      const bool has_pos = !pos.empty(), has_neg = !neg.empty();
      if (has_pos && has_neg) bld.c.push(Gate::cnot(B, A));
      if (has_neg) bld.c.push(Gate::cnot(B, b_q));  // flip x_b on neg states
      int ctl = has_pos ? A : B;
      bld.c.push(Gate::crz(ctl, b_q, -2 * theta));
      if (has_neg) bld.c.push(Gate::cnot(B, b_q));
      if (has_pos && has_neg) bld.c.push(Gate::cnot(B, A));
      for (const auto& g : undo) bld.c.push(g);
    }
    for (int j : pre) bld.c.push(Gate::cnot(b_q, j));
    return bld.c;
  }

  // General path: full table, offset-minimized magnitudes, routed covers.
  if (n > 16)
    throw std::logic_error("phase section too wide for table synthesis");
  std::vector<std::tuple<double, std::uint32_t, int>> tup;
  for (auto& [v, y] : terms) tup.emplace_back(v, y, +1);
  PhaseTable pt = phase_table(tup, n);
  auto covers = distinct_magnitudes(pt);
  for (auto& c : covers) c = compress_minterms(c);
  return synthesize_phase_circuit(covers, n);
}

}  // namespace

Circuit synthesize_exponential_generic(const Fragment& frag, double t) {
  Diagonalization d = diagonalize(frag);
  std::vector<std::pair<double, std::uint32_t>> zt;
  for (const auto& [coeff, zs] : d.zterms)
    zt.emplace_back(coeff * t * zs.sign, zs.z_mask);
  Circuit phase = phase_section(std::move(zt), frag.n);
  if (phase.gates.empty()) return Circuit{frag.n, 0};
  return concat(d.w.dagger(), concat(phase, d.w));
}

Circuit synthesize_exponential(const Fragment& frag, double t) {
  if (auto tmpl = try_template(frag, t)) return std::move(tmpl->circuit);
  return synthesize_exponential_generic(frag, t);
}

}  // namespace hamforge
