#include "hamforge/cli.hpp"

#include <algorithm>
#include <complex>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "hamforge/circuit.hpp"
#include "hamforge/phase_synth.hpp"

namespace hamforge {
namespace {

using nlohmann::ordered_json;

Eigen::MatrixXcd expm_minus_iht(const Eigen::MatrixXcd& h, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXcd phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    phases(i) = std::exp(std::complex<double>(0, -es.eigenvalues()(i) * t));
  return es.eigenvectors() * phases.asDiagonal() *
         es.eigenvectors().adjoint();
}

double dist_up_to_phase(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  std::complex<double> tr = (a.adjoint() * b).trace();
  std::complex<double> phase =
      std::abs(tr) < 1e-12 ? std::complex<double>(1, 0) : tr / std::abs(tr);
  return (a * phase - b).cwiseAbs().maxCoeff();
}

ordered_json fragment_to_json(const Fragment& f) {
  ordered_json terms = ordered_json::array();
  for (const Term& t : f.paulis)
    terms.push_back({{"coeff", t.coeff}, {"pauli", t.pauli.format()}});
  return {{"label", f.label},
          {"scale", f.scale},
          {"n", f.n},
          {"terms", std::move(terms)}};
}

Fragment fragment_from_json(const ordered_json& j) {
  Fragment f;
  f.label = j.value("label", std::string{});
  f.scale = j.at("scale").get<double>();
  f.n = j.at("n").get<int>();
  for (const auto& t : j.at("terms")) {
    PauliString p = PauliString::parse(t.at("pauli").get<std::string>());
    if (p.n != f.n) throw ParseError("fragment term width mismatch");
    f.paulis.push_back({t.at("coeff").get<double>(), p});
  }
  return f;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')
               ? c
               : '_';
  return out.empty() ? std::string("fragment") : out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Oracle check of one fragment circuit; returns the deviation, or throws on
// synthesis failure.  Skipped (returns -1) when the unitary is too wide.
double fragment_deviation(const Fragment& frag, double t) {
  Circuit c = synthesize_exponential(frag, t);
  if (c.width() > 12 || frag.n > 10) return -1.0;
  return dist_up_to_phase(c.system_unitary(), expm_minus_iht(frag.dense(), t));
}

struct ResolvedInput {
  Hamiltonian hamiltonian;
  std::vector<Fragment> fragments;
  bool from_model = false;
  Allocation allocation;  // file path only
};

// Shared input resolution for commands taking --model | --hamiltonian.
ResolvedInput resolve_input(const std::string& model,
                            const std::string& file, std::uint64_t seed,
                            double eps, bool allocate) {
  ResolvedInput r;
  if (!model.empty()) {
    BuiltinModel m = builtin(model, seed);
    r.hamiltonian = std::move(m.hamiltonian);
    r.fragments = m.grouping.fragments();
    r.from_model = true;
    return r;
  }
  r.hamiltonian = Hamiltonian::parse(read_file(file));
  if (r.hamiltonian.terms.empty())
    throw ParseError("hamiltonian has no non-identity terms: " + file);
  if (allocate) {
    r.allocation = greedy_allocate(r.hamiltonian, eps);
    r.fragments = r.allocation.fragments;
  } else {
    r.fragments = partition_commuting(r.hamiltonian);
  }
  return r;
}

}  // namespace

// ---- JSON serialization -------------------------------------------------

std::string fragments_json(const std::string& model,
                           const std::vector<Fragment>& frags) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["model"] = model;
  j["fragments"] = ordered_json::array();
  for (const Fragment& f : frags) j["fragments"].push_back(fragment_to_json(f));
  return j.dump(2) + "\n";
}

std::vector<Fragment> fragments_from_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  std::vector<Fragment> out;
  for (const auto& f : j.at("fragments")) out.push_back(fragment_from_json(f));
  return out;
}

std::string allocation_json(const Allocation& a) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["fragments"] = ordered_json::array();
  for (const Fragment& f : a.fragments)
    j["fragments"].push_back(fragment_to_json(f));
  ordered_json res_terms = ordered_json::array();
  for (const Term& t : a.residual.terms)
    res_terms.push_back({{"coeff", t.coeff}, {"pauli", t.pauli.format()}});
  j["residual"] = {{"identity_coeff", a.residual.identity_coeff},
                   {"terms", std::move(res_terms)}};
  j["trace"] = ordered_json::array();
  for (const auto& row : a.trace)
    j["trace"].push_back({{"iteration", row.iteration},
                          {"one_norm_before", row.one_norm_before},
                          {"gamma_max", row.gamma_max},
                          {"cost", row.cost}});
  return j.dump(2) + "\n";
}

std::string manifest_json(const RunManifest& m) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = m.command;
  j["seed"] = m.seed;
  j["config"] = ordered_json::object();
  for (const auto& [k, v] : m.config) j["config"][k] = v;
  j["outputs"] = m.outputs;
  j["status"] = m.status;
  return j.dump(2) + "\n";
}

void write_manifest(const std::string& dir, const RunManifest& m) {
  std::filesystem::create_directories(dir);
  write_file((std::filesystem::path(dir) / "manifest.json").string(),
             manifest_json(m));
}

// ---- compile ------------------------------------------------------------

CompileResult cmd_compile(const CompileOptions& opt, std::ostream& out) {
  CompileResult res;
  RunManifest manifest;
  manifest.command = "compile";
  manifest.seed = opt.seed;
  manifest.config = {{"model", opt.model},
                     {"hamiltonian", opt.hamiltonian_file},
                     {"t", std::to_string(opt.t)},
                     {"eps", std::to_string(opt.eps)}};
  auto fail = [&](int code, const std::string& msg) {
    res.exit_code = code;
    res.message = msg;
    out << "error: " << msg << "\n";
    if (!opt.out_dir.empty()) {
      manifest.status = "failed";
      try {
        write_manifest(opt.out_dir, manifest);
      } catch (const std::exception&) {
      }
    }
    return res;
  };

  ResolvedInput input;
  try {
    input = resolve_input(opt.model, opt.hamiltonian_file, opt.seed, opt.eps,
                          /*allocate=*/true);
  } catch (const std::exception& e) {
    return fail(kExitInput, e.what());
  }

  std::vector<Circuit> circuits;
  for (const Fragment& frag : input.fragments) {
    Circuit c;
    try {
      c = synthesize_exponential(frag, opt.t);
    } catch (const std::exception& e) {
      return fail(kExitInput,
                  "synthesis failed for fragment '" + frag.label +
                      "': " + e.what());
    }
    if (opt.verify) {
      double dev = fragment_deviation(frag, opt.t);
      if (dev > 1e-9)
        return fail(kExitVerify, "verification failed for fragment '" +
                                     frag.label + "' (deviation " +
                                     std::to_string(dev) + ")");
    }
    auto cost = c.cost();
    res.rows.push_back({frag.label, frag.scale, cost.rotations,
                        cost.toffoli_pairs});
    circuits.push_back(std::move(c));
  }

  out << "group\tcoeff\trotations\ttoffoli_pairs\n";
  char buf[160];
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    const CompileRow& r = res.rows[i];
    // Collapse repeated identical rows (e.g. the per-vertex Z fragments).
    if (i > 0 && res.rows[i - 1].label == r.label &&
        res.rows[i - 1].rotations == r.rotations &&
        res.rows[i - 1].toffoli_pairs == r.toffoli_pairs)
      continue;
    std::snprintf(buf, sizeof buf, "%s\t%.10g\t%ld\t%ld\n", r.label.c_str(),
                  r.scale, r.rotations, r.toffoli_pairs);
    out << buf;
  }

  if (!opt.out_dir.empty()) {
    try {
      namespace fs = std::filesystem;
      fs::create_directories(fs::path(opt.out_dir) / "circuits");
      for (std::size_t i = 0; i < circuits.size(); ++i) {
        std::string name = "circuits/" +
                           std::to_string(i + 1) + "_" +
                           sanitize(input.fragments[i].label) + ".txt";
        write_file((fs::path(opt.out_dir) / name).string(),
                   circuits[i].dump());
        manifest.outputs.push_back(name);
      }
      ordered_json table;
      table["schema_version"] = kSchemaVersion;
      table["model"] = opt.model;
      table["t"] = opt.t;
      table["rows"] = ordered_json::array();
      for (const CompileRow& r : res.rows)
        table["rows"].push_back({{"group", r.label},
                                 {"coeff", r.scale},
                                 {"rotations", r.rotations},
                                 {"toffoli_pairs", r.toffoli_pairs}});
      write_file((fs::path(opt.out_dir) / "cost_table.json").string(),
                 table.dump(2) + "\n");
      manifest.outputs.push_back("cost_table.json");

      Allocation alloc = input.allocation;
      if (input.from_model) {
        alloc.fragments = input.fragments;
        alloc.residual.n = input.hamiltonian.n;
      }
      write_file((fs::path(opt.out_dir) / "allocation.json").string(),
                 allocation_json(alloc));
      manifest.outputs.push_back("allocation.json");
      write_file((fs::path(opt.out_dir) / "grouping.json").string(),
                 fragments_json(opt.model, input.fragments));
      manifest.outputs.push_back("grouping.json");
      write_manifest(opt.out_dir, manifest);
    } catch (const std::exception& e) {
      return fail(kExitInput, e.what());
    }
  }
  return res;
}

// ---- verify -------------------------------------------------------------

VerifyResult cmd_verify(const VerifyOptions& opt, std::ostream& out) {
  VerifyResult res;
  std::vector<Fragment> frags;
  Hamiltonian h;
  bool have_h = false;
  try {
    if (!opt.grouping_file.empty()) {
      frags = fragments_from_json(read_file(opt.grouping_file));
    } else {
      ResolvedInput input = resolve_input(opt.model, opt.hamiltonian_file,
                                          opt.seed, 1e-3,
                                          /*allocate=*/false);
      frags = std::move(input.fragments);
      h = std::move(input.hamiltonian);
      have_h = true;
    }
  } catch (const std::exception& e) {
    res.exit_code = kExitInput;
    res.message = e.what();
    out << "error: " << res.message << "\n";
    return res;
  }
  if (frags.empty()) {
    res.exit_code = kExitInput;
    res.message = "no fragments to verify";
    out << "error: " << res.message << "\n";
    return res;
  }

  auto fail = [&](const Fragment& f, const std::string& why) {
    res.exit_code = kExitVerify;
    res.failed_fragment = f.label;
    res.message = "fragment '" + f.label + "': " + why;
    out << "FAIL " << res.message << "\n";
    return res;
  };

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> td(-2.0, 2.0);
  for (const Fragment& f : frags) {
    if (!f.commuting()) return fail(f, "members do not mutually commute");
    double worst = 0;
    for (int i = 0; i < opt.trials; ++i) {
      double t = td(rng);
      double dev;
      try {
        dev = fragment_deviation(f, t);
      } catch (const std::exception& e) {
        return fail(f, e.what());
      }
      worst = std::max(worst, dev);
      if (dev > 1e-9)
        return fail(f, "unitary deviation " + std::to_string(dev) + " at t=" +
                           std::to_string(t));
    }
    res.max_deviation = std::max(res.max_deviation, worst);
    out << "fragment '" << f.label << "': max deviation " << worst << "\n";
  }

  if (have_h) {
    // Fragments must reconstruct the Hamiltonian exactly.
    std::vector<Term> terms;
    for (const Fragment& f : frags)
      for (const Term& t : f.paulis)
        terms.push_back({f.scale * t.coeff, t.pauli});
    Hamiltonian sum = Hamiltonian::from_terms(h.n, std::move(terms));
    auto key = [](const Term& t) {
      return std::pair<std::uint32_t, std::uint32_t>{t.pauli.x, t.pauli.z};
    };
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> acc;
    for (const Term& t : sum.terms) acc[key(t)] += t.coeff;
    for (const Term& t : h.terms) acc[key(t)] -= t.coeff;
    for (const auto& [k, v] : acc)
      if (std::abs(v) > 1e-12)
        return fail(frags[0], "grouping does not reconstruct the Hamiltonian");
  }

  out << "PASS all " << frags.size() << " fragments, max deviation "
      << res.max_deviation << "\n";
  return res;
}

// ---- sweep --------------------------------------------------------------

SweepOutcome cmd_sweep(const SweepOptions& opt, std::ostream& out) {
  SweepOutcome res;
  auto fail = [&](int code, const std::string& msg) {
    res.exit_code = code;
    res.message = msg;
    out << "error: " << msg << "\n";
    return res;
  };
  if (opt.Ns.empty()) return fail(kExitInput, "sweep: no N values given");

  BuiltinModel model;
  try {
    model = builtin(opt.model, opt.seed);
  } catch (const std::exception& e) {
    return fail(kExitInput, e.what());
  }

  QdriftConfig cfg;
  cfg.t = opt.t;
  cfg.M = opt.M;
  cfg.K = opt.K;
  cfg.seed = opt.seed;
  cfg.jobs = opt.jobs;
  try {
    res.result = sweep(model.hamiltonian,
                       single_fragments(model.hamiltonian),
                       model.grouping.fragments(), opt.Ns, cfg);
    res.factors = reduction_factors(res.result, opt.target_error);
  } catch (const SimGuardError& e) {
    return fail(kExitSimGuard, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(kExitInput, e.what());
  } catch (const std::exception& e) {
    return fail(kExitSimGuard, e.what());
  }

  double lambda = 0;
  for (const Fragment& f : fold_signs(model.grouping.fragments()))
    lambda += f.scale;
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["model"] = opt.model;
  j["seed"] = opt.seed;
  j["t"] = opt.t;
  j["M"] = opt.M;
  j["K"] = opt.K;
  j["lambda"] = lambda;
  j["lambda_prime"] = model.hamiltonian.one_norm();
  j["target_error"] = res.factors.target_error;
  j["iteration_factor"] = res.factors.iteration_factor;
  j["rotation_factor"] = res.factors.rotation_factor;
  res.summary_json = j.dump(2) + "\n";
  out << res.summary_json;

  if (!opt.out_csv.empty() || !opt.out_summary.empty()) {
    RunManifest manifest;
    manifest.command = "sweep";
    manifest.seed = opt.seed;
    manifest.config = {{"model", opt.model},
                       {"M", std::to_string(opt.M)},
                       {"K", std::to_string(opt.K)},
                       {"t", std::to_string(opt.t)}};
    try {
      auto emit = [&](const std::string& path, const std::string& content) {
        auto parent = std::filesystem::path(path).parent_path();
        if (!parent.empty()) std::filesystem::create_directories(parent);
        write_file(path, content);
        manifest.outputs.push_back(path);
      };
      if (!opt.out_csv.empty()) emit(opt.out_csv, res.result.csv());
      if (!opt.out_summary.empty()) emit(opt.out_summary, res.summary_json);
      const std::string& anchor =
          opt.out_csv.empty() ? opt.out_summary : opt.out_csv;
      write_manifest(std::filesystem::path(anchor).parent_path().string(),
                     manifest);
    } catch (const std::exception& e) {
      return fail(kExitInput, e.what());
    }
  }
  return res;
}

// ---- bounds -------------------------------------------------------------

BoundsOutcome cmd_bounds(const BoundsOptions& opt, std::ostream& out) {
  BoundsOutcome res;
  ResolvedInput input;
  try {
    input = resolve_input(opt.model, opt.hamiltonian_file, opt.seed, 1e-3,
                          /*allocate=*/false);
    if (opt.N < 1) throw std::invalid_argument("bounds: N must be >= 1");
    if (opt.delta < 0)
      throw std::invalid_argument("bounds: delta must be >= 0");
  } catch (const std::exception& e) {
    res.exit_code = kExitInput;
    res.message = e.what();
    out << "error: " << res.message << "\n";
    return res;
  }

  double lambda = 0;
  for (const Fragment& f : fold_signs(input.fragments)) lambda += f.scale;
  double lambda_prime = input.hamiltonian.one_norm();

  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["model"] = opt.model;
  j["t"] = opt.t;
  j["N"] = opt.N;
  j["delta"] = opt.delta;
  j["lambda"] = lambda;
  j["lambda_prime"] = lambda_prime;
  j["bound_mult"] = bound_mult(lambda_prime, opt.t, opt.N);
  j["bound_trunc_step"] = bound_trunc(lambda, opt.t, opt.N, opt.delta);
  j["bound_trunc_total"] =
      bound_trunc_total(lambda, opt.t, opt.N, opt.delta);
  try {
    CostSummary cs = expected_cost(input.fragments, opt.N, opt.eps_c);
    j["expected_cost"] = {{"mean", cs.mean},
                          {"variance", cs.variance},
                          {"high_prob_bound", cs.high_prob_bound}};
  } catch (const std::exception&) {
    // cost summary is best-effort (e.g. zero-scale fragments)
  }
  res.json = j.dump(2) + "\n";
  out << res.json;
  return res;
}

}  // namespace hamforge
