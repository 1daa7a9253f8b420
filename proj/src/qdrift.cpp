#include "hamforge/qdrift.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numeric>
#include <thread>

#include <Eigen/Eigenvalues>

#include "hamforge/phase_synth.hpp"
#include "hamforge/rng.hpp"

namespace hamforge {
namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// exp(+i s A) for Hermitian A.
MatrixXcd herm_exp_i(const MatrixXcd& a, double s) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(a);
  VectorXcd phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    phases(i) = std::exp(std::complex<double>(0, s * es.eigenvalues()(i)));
  return es.eigenvectors() * phases.asDiagonal() *
         es.eigenvectors().adjoint();
}

// Unit-coefficient Pauli sum of a fragment (scale excluded).
MatrixXcd generator_dense(const Fragment& f) {
  const int dim = 1 << f.n;
  MatrixXcd g = MatrixXcd::Zero(dim, dim);
  for (const Term& t : f.paulis) g += t.coeff * t.pauli.dense();
  return g;
}

double spectral_norm_herm(const MatrixXcd& d) {
  MatrixXcd h = 0.5 * (d + d.adjoint());
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double trace_norm_herm(const MatrixXcd& d) {
  MatrixXcd h = 0.5 * (d + d.adjoint());
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

VectorXcd haar_state(int dim, std::mt19937_64 eng) {
  NormalSampler ns(std::move(eng));
  VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = std::complex<double>(ns(), ns());
  return v / v.norm();
}

std::vector<double> positive_weights(const std::vector<Fragment>& frags,
                                     const char* who) {
  std::vector<double> w;
  for (const Fragment& f : frags) {
    if (!(f.scale > 0.0))
      throw std::invalid_argument(std::string(who) +
                                  ": fragment scales must be positive "
                                  "(fold signs into the angles first)");
    w.push_back(f.scale);
  }
  return w;
}

std::vector<int> draw_protocol(const std::vector<double>& cumulative,
                               double lambda, long n, std::mt19937_64& rng) {
  std::vector<int> out(n);
  for (long i = 0; i < n; ++i) {
    double u = uniform01(rng) * lambda;
    out[i] = static_cast<int>(
        std::upper_bound(cumulative.begin(), cumulative.end(), u) -
        cumulative.begin());
    if (out[i] >= static_cast<int>(cumulative.size()))
      out[i] = static_cast<int>(cumulative.size()) - 1;
  }
  return out;
}

void check_config(const QdriftConfig& cfg) {
  if (cfg.N < 1 || cfg.M < 1 || cfg.K < 1)
    throw std::invalid_argument("qdrift: N, M, K must all be >= 1");
  if (!std::isfinite(cfg.t))
    throw std::invalid_argument("qdrift: t must be finite");
}

}  // namespace

void DensityState::validate() const {
  if (rho.rows() != rho.cols())
    throw std::runtime_error("DensityState: non-square matrix");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::runtime_error("DensityState: not Hermitian");
  if (std::abs(rho.trace() - std::complex<double>(1, 0)) > 1e-10)
    throw std::runtime_error("DensityState: trace != 1");
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9)
    throw std::runtime_error("DensityState: not positive semidefinite");
}

std::vector<Fragment> fold_signs(std::vector<Fragment> frags) {
  std::vector<Fragment> out;
  for (Fragment& f : frags) {
    if (f.scale == 0.0) continue;
    if (f.scale < 0.0) {
      f.scale = -f.scale;
      for (Term& t : f.paulis) t.coeff = -t.coeff;
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Fragment> single_fragments(const Hamiltonian& h) {
  std::vector<Fragment> out;
  for (const Term& t : h.terms) {
    Fragment f;
    f.n = h.n;
    f.scale = t.coeff;
    f.paulis.push_back({1.0, t.pauli});
    f.label = t.pauli.format();
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<int> sample_protocol(const std::vector<Fragment>& frags, long N,
                                 std::mt19937_64& rng) {
  if (frags.empty())
    throw std::invalid_argument("sample_protocol: no fragments");
  if (N < 0) throw std::invalid_argument("sample_protocol: N must be >= 0");
  std::vector<double> w = positive_weights(frags, "sample_protocol");
  std::vector<double> cum(w.size());
  std::partial_sum(w.begin(), w.end(), cum.begin());
  return draw_protocol(cum, cum.back(), N, rng);
}

DensityState exact_channel(const Hamiltonian& h, double t,
                           const DensityState& rho) {
  if (h.n > 10) throw SimGuardError("exact_channel: n must be <= 10");
  MatrixXcd u = herm_exp_i(h.dense(), t);
  return {u * rho.rho * u.adjoint()};
}

DensityState apply_protocol(const std::vector<int>& protocol,
                            const std::vector<Fragment>& frags, double tau,
                            const DensityState& rho) {
  if (protocol.empty()) return rho;
  const int dim = static_cast<int>(rho.rho.rows());
  MatrixXcd v = MatrixXcd::Identity(dim, dim);
  std::vector<MatrixXcd> step(frags.size());
  std::vector<char> built(frags.size(), 0);
  for (int idx : protocol) {
    if (idx < 0 || idx >= static_cast<int>(frags.size()))
      throw std::invalid_argument("apply_protocol: index out of range");
    if (!built[idx]) {
      step[idx] = herm_exp_i(generator_dense(frags[idx]), tau);
      built[idx] = 1;
    }
    v = step[idx] * v;
  }
  return {v * rho.rho * v.adjoint()};
}

double estimate_error(const Hamiltonian& h,
                      const std::vector<Fragment>& frags,
                      const QdriftConfig& cfg) {
  if (h.n > 8) throw SimGuardError("estimate_error: n must be <= 8");
  check_config(cfg);
  if (cfg.t == 0.0) return 0.0;
  std::vector<Fragment> folded = fold_signs(frags);
  if (folded.empty())
    throw std::invalid_argument("estimate_error: no nonzero fragments");

  std::vector<double> w = positive_weights(folded, "estimate_error");
  std::vector<double> cum(w.size());
  std::partial_sum(w.begin(), w.end(), cum.begin());
  const double lambda = cum.back();
  const double tau = cfg.t * lambda / static_cast<double>(cfg.N);
  const int dim = 1 << h.n;
  const int K = cfg.K;

  // Haar state block and the exact evolution of its columns.
  MatrixXcd psi(dim, K);
  for (int k = 0; k < K; ++k)
    psi.col(k) = haar_state(dim, substream(cfg.seed, 2 * k));
  MatrixXcd phi = herm_exp_i(h.dense(), cfg.t) * psi;

  std::vector<MatrixXcd> step;
  for (const Fragment& f : folded)
    step.push_back(herm_exp_i(generator_dense(f), tau));

  // Fixed chunking (16 protocols per chunk) with a sequential reduction in
  // chunk order keeps the result independent of the number of workers.
  constexpr int kChunk = 16;
  const int n_chunks = (cfg.M + kChunk - 1) / kChunk;
  std::vector<std::vector<MatrixXcd>> partial(n_chunks);
  std::atomic<int> next_chunk{0};

  auto worker = [&]() {
    for (;;) {
      int c = next_chunk.fetch_add(1);
      if (c >= n_chunks) return;
      std::vector<MatrixXcd> acc(K, MatrixXcd::Zero(dim, dim));
      int lo = c * kChunk, hi = std::min(cfg.M, lo + kChunk);
      for (int s = lo; s < hi; ++s) {
        std::mt19937_64 eng = substream(cfg.seed, 2 * s + 1);
        std::vector<int> protocol = draw_protocol(cum, lambda, cfg.N, eng);
        MatrixXcd block = psi;
        for (int idx : protocol) block = step[idx] * block;
        for (int k = 0; k < K; ++k)
          acc[k] += block.col(k) * block.col(k).adjoint();
      }
      partial[c] = std::move(acc);
    }
  };

  int jobs = std::clamp(cfg.jobs, 1, n_chunks);
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  double err = 0.0;
  for (int k = 0; k < K; ++k) {
    MatrixXcd e2 = MatrixXcd::Zero(dim, dim);
    for (int c = 0; c < n_chunks; ++c) e2 += partial[c][k];
    e2 /= static_cast<double>(cfg.M);
    MatrixXcd diff = e2 - phi.col(k) * phi.col(k).adjoint();
    err += spectral_norm_herm(diff);
  }
  return err / K;
}

StepCost expected_step_cost(const std::vector<Fragment>& frags) {
  std::vector<Fragment> folded = fold_signs(frags);
  std::vector<double> w = positive_weights(folded, "expected_step_cost");
  double lambda = std::accumulate(w.begin(), w.end(), 0.0);
  StepCost sc;
  for (std::size_t j = 0; j < folded.size(); ++j) {
    auto cost = synthesize_exponential(folded[j], 1.0).cost();
    double p = w[j] / lambda;
    sc.rotations += p * static_cast<double>(std::max<long>(1, cost.rotations));
    sc.toffoli_pairs += p * static_cast<double>(cost.toffoli_pairs);
  }
  return sc;
}

std::string SweepResult::csv() const {
  std::string out = "N,mode,error,rotations,toffoli_pairs\n";
  char buf[160];
  for (const SweepRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%ld,%s,%.9g,%.9g,%.9g\n", r.N,
                  r.mode.c_str(), r.error, r.rotations, r.toffoli_pairs);
    out += buf;
  }
  return out;
}

SweepResult sweep(const Hamiltonian& h,
                  const std::vector<Fragment>& frags_single,
                  const std::vector<Fragment>& frags_grouped,
                  const std::vector<long>& Ns, const QdriftConfig& cfg) {
  check_config(cfg);
  std::vector<long> sorted_ns = Ns;
  std::sort(sorted_ns.begin(), sorted_ns.end());
  const StepCost cost_single = expected_step_cost(frags_single);
  const StepCost cost_grouped = expected_step_cost(frags_grouped);

  SweepResult out;
  for (long n_iter : sorted_ns) {
    if (n_iter < 1) throw std::invalid_argument("sweep: N must be >= 1");
    QdriftConfig c = cfg;
    c.N = n_iter;
    double dn = static_cast<double>(n_iter);
    out.rows.push_back({n_iter, "single",
                        estimate_error(h, frags_single, c),
                        dn * cost_single.rotations,
                        dn * cost_single.toffoli_pairs});
    out.rows.push_back({n_iter, "grouped",
                        estimate_error(h, frags_grouped, c),
                        dn * cost_grouped.rotations,
                        dn * cost_grouped.toffoli_pairs});
  }
  return out;
}

namespace {

struct CurvePoint {
  double err, n, rot;
};

// Log-log linear interpolation of (N, rotations) at the target error; falls
// back to the log-nearest point when the target is outside the curve.
CurvePoint interp_at(const std::vector<CurvePoint>& curve, double target) {
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    double a = curve[i].err, b = curve[i + 1].err;
    if ((a - target) * (b - target) <= 0.0 && a > 0 && b > 0) {
      double wgt = (a == b) ? 0.0
                            : (std::log(target) - std::log(a)) /
                                  (std::log(b) - std::log(a));
      auto lerp = [&](double x, double y) {
        return std::exp(std::log(x) + wgt * (std::log(y) - std::log(x)));
      };
      return {target, lerp(curve[i].n, curve[i + 1].n),
              lerp(curve[i].rot, curve[i + 1].rot)};
    }
  }
  const CurvePoint* best = nullptr;
  double best_d = 0;
  for (const CurvePoint& p : curve) {
    if (p.err <= 0) continue;
    double d = std::abs(std::log(p.err) - std::log(target));
    if (!best || d < best_d) {
      best = &p;
      best_d = d;
    }
  }
  if (!best) throw std::runtime_error("reduction_factors: no positive errors");
  return *best;
}

}  // namespace

FactorSummary reduction_factors(const SweepResult& sr, double target_error) {
  std::vector<CurvePoint> single, grouped;
  for (const SweepRow& r : sr.rows) {
    CurvePoint p{r.error, static_cast<double>(r.N), r.rotations};
    (r.mode == "single" ? single : grouped).push_back(p);
  }
  if (single.empty() || grouped.empty())
    throw std::invalid_argument("reduction_factors: need both curves");

  auto positive_range = [](const std::vector<CurvePoint>& c, double& lo,
                           double& hi) {
    lo = 0;
    hi = 0;
    for (const CurvePoint& p : c) {
      if (p.err <= 0) continue;
      if (lo == 0 || p.err < lo) lo = p.err;
      if (p.err > hi) hi = p.err;
    }
  };

  FactorSummary out;
  if (target_error > 0) {
    out.target_error = target_error;
  } else {
    double lo_s, hi_s, lo_g, hi_g;
    positive_range(single, lo_s, hi_s);
    positive_range(grouped, lo_g, hi_g);
    double lo = std::max(lo_s, lo_g), hi = std::min(hi_s, hi_g);
    if (lo <= 0 || hi <= 0)
      throw std::runtime_error("reduction_factors: degenerate error curves");
    if (lo > hi) std::swap(lo, hi);  // curves barely overlap; still read off
    out.target_error = std::sqrt(lo * hi);
  }

  CurvePoint ps = interp_at(single, out.target_error);
  CurvePoint pg = interp_at(grouped, out.target_error);
  out.iteration_factor = ps.n / pg.n;
  out.rotation_factor = ps.rot / pg.rot;
  return out;
}

double bound_mult(double lambda_prime, double t, long N) {
  if (N < 1) throw std::invalid_argument("bound_mult: N must be >= 1");
  double x = t * lambda_prime / static_cast<double>(N);
  return 4.0 * x * x;
}

double bound_trunc(double lambda, double t, long N, double delta) {
  if (N < 1) throw std::invalid_argument("bound_trunc: N must be >= 1");
  if (delta < 0) throw std::invalid_argument("bound_trunc: delta must be >= 0");
  double x = lambda * t / static_cast<double>(N);
  double eps_q = 2.0 * x * x;
  return eps_q + 2.0 * delta * std::sqrt(eps_q);
}

double bound_trunc_total(double lambda, double t, long N, double delta) {
  if (N < 1) throw std::invalid_argument("bound_trunc_total: N must be >= 1");
  if (delta < 0)
    throw std::invalid_argument("bound_trunc_total: delta must be >= 0");
  return 2.0 * lambda * lambda * t * t / static_cast<double>(N) +
         2.0 * std::sqrt(2.0) * delta * lambda * t;
}

double channel_step_distance(const std::vector<Fragment>& grouped, double t,
                             long N, int probes, std::uint64_t seed) {
  std::vector<Fragment> folded = fold_signs(grouped);
  if (folded.empty())
    throw std::invalid_argument("channel_step_distance: no fragments");
  const int n = folded[0].n;
  if (n > 3) throw SimGuardError("channel_step_distance: n must be <= 3");
  const int dim = 1 << n;

  double lambda = 0, lambda_prime = 0;
  for (const Fragment& f : folded) {
    lambda += f.scale;
    lambda_prime += f.scale * static_cast<double>(f.paulis.size());
  }
  const double tau = lambda * t / static_cast<double>(N);
  const double tau_prime = lambda_prime * t / static_cast<double>(N);

  // Grouped step: e^{+i G_j tau} with probability h_j / lambda.
  std::vector<MatrixXcd> gu;
  std::vector<double> gq;
  for (const Fragment& f : folded) {
    gu.push_back(herm_exp_i(generator_dense(f), tau));
    gq.push_back(f.scale / lambda);
  }
  // Single step: e^{+i (unit P) tau'} with probability h_j / lambda' per
  // (group, member) pair.
  std::vector<MatrixXcd> su;
  std::vector<double> sp;
  for (const Fragment& f : folded)
    for (const Term& term : f.paulis) {
      su.push_back(herm_exp_i(term.coeff * term.pauli.dense(), tau_prime));
      sp.push_back(f.scale / lambda_prime);
    }

  double worst = 0.0;
  for (int p = 0; p < probes; ++p) {
    VectorXcd v = haar_state(dim, substream(seed, p));
    MatrixXcd rho = v * v.adjoint();
    MatrixXcd e1 = MatrixXcd::Zero(dim, dim), e2 = MatrixXcd::Zero(dim, dim);
    for (std::size_t j = 0; j < gu.size(); ++j)
      e1 += gq[j] * gu[j] * rho * gu[j].adjoint();
    for (std::size_t j = 0; j < su.size(); ++j)
      e2 += sp[j] * su[j] * rho * su[j].adjoint();
    worst = std::max(worst, trace_norm_herm(e2 - e1));
  }
  return worst;
}

CostSummary expected_cost(const std::vector<double>& weights,
                          const std::vector<double>& costs, long N,
                          double eps_c) {
  if (weights.size() != costs.size() || weights.empty())
    throw std::invalid_argument("expected_cost: weight/cost size mismatch");
  if (!(eps_c > 0.0 && eps_c < 1.0))
    throw std::invalid_argument("expected_cost: eps_c must be in (0,1)");
  if (N < 1) throw std::invalid_argument("expected_cost: N must be >= 1");
  double lambda = 0;
  for (double w : weights) {
    if (!(w > 0)) throw std::invalid_argument("expected_cost: weights > 0");
    lambda += w;
  }
  double mu = 0, m2 = 0;
  double a = costs[0], b = costs[0];
  for (std::size_t j = 0; j < costs.size(); ++j) {
    double p = weights[j] / lambda;
    mu += p * costs[j];
    m2 += p * costs[j] * costs[j];
    a = std::min(a, costs[j]);
    b = std::max(b, costs[j]);
  }
  CostSummary out;
  out.mean = static_cast<double>(N) * mu;
  out.variance = m2 - mu * mu;
  double c = (mu > 0)
                 ? (b - a) / (mu * std::sqrt(2.0 * static_cast<double>(N))) *
                       std::log(2.0 / eps_c)
                 : 0.0;
  out.high_prob_bound = (c + 1.0) * static_cast<double>(N) * mu;
  return out;
}

CostSummary expected_cost(const std::vector<Fragment>& frags, long N,
                          double eps_c) {
  std::vector<Fragment> folded = fold_signs(frags);
  std::vector<double> w = positive_weights(folded, "expected_cost");
  std::vector<double> costs;
  for (const Fragment& f : folded) {
    auto cost = synthesize_exponential(f, 1.0).cost();
    costs.push_back(static_cast<double>(std::max<long>(1, cost.rotations) +
                                        cost.toffoli_pairs));
  }
  return expected_cost(w, costs, N, eps_c);
}

}  // namespace hamforge
