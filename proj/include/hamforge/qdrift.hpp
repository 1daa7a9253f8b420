// qDRIFT protocol sampling, channel estimators, the Monte-Carlo error
// metric, parameter sweeps, and the analytic error/cost bounds.
#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hamforge/pauli.hpp"

namespace hamforge {

// Simulation-size or configuration guard violations (CLI exit code 4).
struct SimGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class QdriftMode { kSingle, kGrouped };

struct QdriftConfig {
  double t = 1.0;
  long N = 1;          // qDRIFT iterations
  int M = 500;         // protocol samples
  int K = 32;          // Haar state samples
  std::uint64_t seed = 0;
  QdriftMode mode = QdriftMode::kGrouped;
  int jobs = 1;
};

struct DensityState {
  Eigen::MatrixXcd rho;
  // Hermitian within 1e-10, trace 1 within 1e-10, PSD within -1e-9.
  void validate() const;
};

// Positive-scale normal form: negative scales are folded into the unit
// coefficients ("the negation affects the angles"); zero-scale fragments are
// dropped.
std::vector<Fragment> fold_signs(std::vector<Fragment> frags);

// One single-Pauli fragment per term (scale = coefficient).
std::vector<Fragment> single_fragments(const Hamiltonian& h);

// N i.i.d. fragment indices, each drawn with probability scale_j / lambda.
// Throws std::invalid_argument on a non-positive scale.
std::vector<int> sample_protocol(const std::vector<Fragment>& frags, long N,
                                 std::mt19937_64& rng);

// E1 = e^{+iHt} rho e^{-iHt}.  n <= 10.
DensityState exact_channel(const Hamiltonian& h, double t,
                           const DensityState& rho);

// V rho V^dag with V the ordered product of e^{+i G_j tau}, where G_j is
// fragment j's unit-coefficient Pauli sum (the scale magnitude is carried by
// tau = t*lambda/N, its sign by fold_signs).
DensityState apply_protocol(const std::vector<int>& protocol,
                            const std::vector<Fragment>& frags, double tau,
                            const DensityState& rho);

// Monte-Carlo error: mean over K Haar-random pure states of the spectral
// norm of E2(rho) - E1(rho), with E2 the M-sample average qDRIFT channel.
// Deterministic given (seed, cfg) regardless of cfg.jobs.  n <= 8.
double estimate_error(const Hamiltonian& h,
                      const std::vector<Fragment>& frags,
                      const QdriftConfig& cfg);

struct StepCost {
  double rotations = 0;      // expected per-iteration
  double toffoli_pairs = 0;
};
StepCost expected_step_cost(const std::vector<Fragment>& frags);

struct SweepRow {
  long N = 0;
  std::string mode;  // "single" | "grouped"
  double error = 0;
  double rotations = 0;
  double toffoli_pairs = 0;
};
struct SweepResult {
  std::vector<SweepRow> rows;  // sorted by N, single before grouped
  std::string csv() const;     // header N,mode,error,rotations,toffoli_pairs
};

SweepResult sweep(const Hamiltonian& h,
                  const std::vector<Fragment>& frags_single,
                  const std::vector<Fragment>& frags_grouped,
                  const std::vector<long>& Ns, const QdriftConfig& cfg);

// Iteration / rotation reduction factors read off the two curves by log-log
// linear interpolation at the target error (0 -> geometric midpoint of the
// overlapping error range).
struct FactorSummary {
  double target_error = 0;
  double iteration_factor = 0;
  double rotation_factor = 0;
};
FactorSummary reduction_factors(const SweepResult& sr,
                                double target_error = 0.0);

// Lemma bounds.
double bound_mult(double lambda_prime, double t, long N);  // 4 t^2 l'^2 / N^2
// Per-step: eps_q + 2*delta*sqrt(eps_q) with eps_q = 2 lambda^2 t^2 / N^2.
double bound_trunc(double lambda, double t, long N, double delta);
// Total over N steps: 2 lambda^2 t^2 / N + 2*sqrt(2)*delta*lambda*t.
double bound_trunc_total(double lambda, double t, long N, double delta);

// Numerical per-step channel distance between the grouped-step channel
// (tau = lambda t/N) and the single-Pauli-step channel (tau' = lambda' t/N):
// max over `probes` random states of the trace-norm difference.  n <= 3.
double channel_step_distance(const std::vector<Fragment>& grouped, double t,
                             long N, int probes, std::uint64_t seed);

struct CostSummary {
  double mean = 0;             // N * mu_N
  double variance = 0;         // per-repetition sigma_N^2
  double high_prob_bound = 0;  // (c+1) N mu_N at confidence 1 - eps_c
};
CostSummary expected_cost(const std::vector<double>& weights,
                          const std::vector<double>& costs, long N,
                          double eps_c);
// Costs taken as rotations + Toffoli pairs of each fragment's circuit.
CostSummary expected_cost(const std::vector<Fragment>& frags, long N,
                          double eps_c);

}  // namespace hamforge
