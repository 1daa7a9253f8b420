// Command implementations behind the CLI front end: compile, verify, sweep,
// and bounds, plus the JSON serialization (allocation dumps, grouping
// sidecars, cost tables) and the RunManifest written alongside every run.
//
// Exit codes: 0 ok, 2 input error, 3 verification failure, 4 simulation
// guard.
#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "hamforge/grouping.hpp"
#include "hamforge/models.hpp"
#include "hamforge/pauli.hpp"
#include "hamforge/qdrift.hpp"

namespace hamforge {

inline constexpr int kSchemaVersion = 1;
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitVerify = 3;
inline constexpr int kExitSimGuard = 4;

// ---- JSON serialization -------------------------------------------------

std::string fragments_json(const std::string& model,
                           const std::vector<Fragment>& frags);
std::vector<Fragment> fragments_from_json(const std::string& text);
std::string allocation_json(const Allocation& a);

struct RunManifest {
  std::string command;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> config;
  std::vector<std::string> outputs;
  std::string status = "ok";  // "ok" | "failed"
};
std::string manifest_json(const RunManifest& m);
// Writes <dir>/manifest.json (created last; records failures too).
void write_manifest(const std::string& dir, const RunManifest& m);

// ---- compile ------------------------------------------------------------

struct CompileOptions {
  std::string model;             // one of the builtin names, or empty
  std::string hamiltonian_file;  // used when model is empty
  double t = 1.0;
  double eps = 1e-3;  // greedy_allocate stopping fraction (file inputs)
  std::uint64_t seed = kDefaultModelSeed;
  std::string out_dir;  // empty: print only, write nothing
  bool verify = true;   // oracle-check each circuit when small enough
};

struct CompileRow {
  std::string label;
  double scale = 0;
  long rotations = 0;
  long toffoli_pairs = 0;
};

struct CompileResult {
  int exit_code = kExitOk;
  std::string message;
  std::vector<CompileRow> rows;  // one per fragment, in grouping order
};

CompileResult cmd_compile(const CompileOptions& opt, std::ostream& out);

// ---- verify -------------------------------------------------------------

struct VerifyOptions {
  std::string model;
  std::string hamiltonian_file;
  std::string grouping_file;  // optional JSON sidecar to check instead
  int trials = 20;
  std::uint64_t seed = kDefaultModelSeed;
};

struct VerifyResult {
  int exit_code = kExitOk;
  std::string message;
  double max_deviation = 0;
  std::string failed_fragment;  // named on failure
};

VerifyResult cmd_verify(const VerifyOptions& opt, std::ostream& out);

// ---- sweep --------------------------------------------------------------

struct SweepOptions {
  std::string model;
  std::vector<long> Ns;
  double t = 1.0;
  int M = 500;
  int K = 32;
  std::uint64_t seed = kDefaultModelSeed;
  double target_error = 0.0;  // 0: geometric midpoint of the overlap
  int jobs = 1;
  std::string out_csv;      // optional file paths
  std::string out_summary;
};

struct SweepOutcome {
  int exit_code = kExitOk;
  std::string message;
  SweepResult result;
  FactorSummary factors;
  std::string summary_json;
};

SweepOutcome cmd_sweep(const SweepOptions& opt, std::ostream& out);

// ---- bounds -------------------------------------------------------------

struct BoundsOptions {
  std::string model;
  std::string hamiltonian_file;
  double t = 1.0;
  long N = 100;
  double delta = 0.0;  // additionally reports values after truncation
  double eps_c = 0.05;
  std::uint64_t seed = kDefaultModelSeed;
};

struct BoundsOutcome {
  int exit_code = kExitOk;
  std::string message;
  std::string json;
};

BoundsOutcome cmd_bounds(const BoundsOptions& opt, std::ostream& out);

}  // namespace hamforge
