// End-to-end tests of the hamforge binary.  The binary path comes from the
// HAMFORGE_CLI_BIN environment variable (set by CTest); defaults to
// ./hamforge next to the test binary.
#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <filesystem>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

std::string cli_bin() {
  const char* env = std::getenv("HAMFORGE_CLI_BIN");
  return env ? env : "./hamforge";
}

fs::path scratch_dir() {
  static fs::path dir = [] {
    fs::path p = fs::temp_directory_path() /
                 ("hamforge_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  f << content;
}

struct RunResult {
  int code = -1;
  std::string output;  // stdout + stderr
};

RunResult run(const std::string& args, const std::string& extra_env = "") {
  static int counter = 0;
  fs::path out = scratch_dir() / ("out" + std::to_string(counter++) + ".txt");
  std::string cmd = extra_env + (extra_env.empty() ? "" : " ") + cli_bin() +
                    " " + args + " >" + out.string() + " 2>&1";
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.output = slurp(out);
  return r;
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += (c == '\n');
  return n;
}

}  // namespace

TEST_CASE("compile --model H2 prints the seven-row cost table") {
  RunResult r = run("compile --model H2 --t 1");
  CHECK(r.code == 0);
  CHECK(count_lines(r.output) == 8);  // header + 7 rows
  CHECK(r.output.find("exc\t0.04919764587\t1\t3") != std::string::npos);
  CHECK(r.output.find("ZZ-ring\t0.1554266908\t1\t1") != std::string::npos);
}

TEST_CASE("compile --model heis6 prints four collapsed rows") {
  RunResult r = run("compile --model heis6 --seed 7");
  CHECK(r.code == 0);
  CHECK(count_lines(r.output) == 5);  // header + 3 rings + one Z row
  CHECK(r.output.find("XX-ring") != std::string::npos);
  CHECK(r.output.find("Z_(i)") != std::string::npos);
}

TEST_CASE("compile input errors exit with code 2") {
  CHECK(run("compile --hamiltonian /nonexistent.ham").code == 2);

  fs::path empty = scratch_dir() / "empty.ham";
  spit(empty, "# nothing here\n");
  RunResult r = run("compile --hamiltonian " + empty.string());
  CHECK(r.code == 2);

  CHECK(run("compile --model NoSuchModel").code == 2);
  CHECK(run("compile --badflag").code == 2);
}

TEST_CASE("compile --out writes circuits, tables, and the manifest") {
  fs::path out = scratch_dir() / "h2_out";
  RunResult r = run("compile --model H2 --out " + out.string());
  REQUIRE(r.code == 0);
  CHECK(fs::exists(out / "cost_table.json"));
  CHECK(fs::exists(out / "allocation.json"));
  CHECK(fs::exists(out / "grouping.json"));
  CHECK(fs::exists(out / "manifest.json"));
  CHECK(fs::exists(out / "circuits" / "3_exc.txt"));

  std::string manifest = slurp(out / "manifest.json");
  CHECK(manifest.find("\"schema_version\": 1") != std::string::npos);
  CHECK(manifest.find("\"status\": \"ok\"") != std::string::npos);
  CHECK(manifest.find("cost_table.json") != std::string::npos);

  std::string table = slurp(out / "cost_table.json");
  CHECK(table.find("\"rotations\": 1") != std::string::npos);
}

TEST_CASE("verify --model H2 passes") {
  RunResult r = run("verify --model H2 --trials 3");
  CHECK(r.code == 0);
  CHECK(r.output.find("PASS") != std::string::npos);
}

TEST_CASE("verify rejects a corrupted grouping file naming the fragment") {
  fs::path out = scratch_dir() / "lih_out";
  REQUIRE(run("compile --model LiH --out " + out.string()).code == 0);

  // Corrupt one term of the 'exc' fragment: XYYX -> XYYZ anticommutes with
  // the rest, so the commutation check must name 'exc'.
  std::string grouping = slurp(out / "grouping.json");
  auto pos = grouping.find("XYYX");
  REQUIRE(pos != std::string::npos);
  grouping.replace(pos, 4, "XYYZ");
  fs::path bad = scratch_dir() / "bad_grouping.json";
  spit(bad, grouping);

  RunResult r = run("verify --grouping " + bad.string());
  CHECK(r.code == 3);
  CHECK(r.output.find("exc") != std::string::npos);
  CHECK(r.output.find("FAIL") != std::string::npos);
}

TEST_CASE("sweep writes a well-formed CSV and is byte-identical per seed") {
  fs::path csv1 = scratch_dir() / "s1" / "sweep.csv";
  fs::path csv2 = scratch_dir() / "s2" / "sweep.csv";
  std::string common =
      "sweep --model heis4 --Ns 8,16 --M 20 --K 4 --seed 11 --out ";
  REQUIRE(run(common + csv1.string() + " --summary " +
              (scratch_dir() / "s1" / "summary.json").string())
              .code == 0);
  REQUIRE(run(common + csv2.string()).code == 0);

  std::string c1 = slurp(csv1);
  CHECK(c1 == slurp(csv2));
  CHECK(c1.rfind("N,mode,error,rotations,toffoli_pairs\n", 0) == 0);
  CHECK(count_lines(c1) == 5);  // header + 2 Ns x 2 modes
  CHECK(fs::exists(scratch_dir() / "s1" / "summary.json"));
  CHECK(fs::exists(scratch_dir() / "s1" / "manifest.json"));
  std::string summary = slurp(scratch_dir() / "s1" / "summary.json");
  CHECK(summary.find("iteration_factor") != std::string::npos);

  CHECK(run("sweep --model heis4 --Ns 0 --M 4 --K 2").code == 2);
  CHECK(run("sweep --model NoSuchModel --Ns 8").code == 2);
}

TEST_CASE("HAMFORGE_SEED env is a fallback for --seed") {
  RunResult flag = run("compile --model heis4 --seed 99");
  RunResult env = run("compile --model heis4", "HAMFORGE_SEED=99");
  RunResult other = run("compile --model heis4 --seed 100");
  CHECK(flag.code == 0);
  CHECK(flag.output == env.output);
  CHECK(flag.output != other.output);

  // CLI flag overrides the environment.
  RunResult both = run("compile --model heis4 --seed 99", "HAMFORGE_SEED=7");
  CHECK(both.output == flag.output);
}

TEST_CASE("config file supplies flags, CLI overrides") {
  fs::path cfg = scratch_dir() / "compile.cfg";
  spit(cfg, "compile.model=H2\n");
  RunResult from_cfg = run("compile --config " + cfg.string());
  RunResult direct = run("compile --model H2");
  CHECK(from_cfg.code == 0);
  CHECK(from_cfg.output == direct.output);

  RunResult overridden =
      run("compile --config " + cfg.string() + " --model LiH");
  CHECK(overridden.code == 0);
  CHECK(overridden.output != direct.output);
  CHECK(count_lines(overridden.output) == 11);  // header + 10 LiH rows
}

TEST_CASE("bounds evaluates the printed formulas") {
  fs::path one = scratch_dir() / "one.ham";
  spit(one, "1.0 Z\n");
  RunResult r = run("bounds --hamiltonian " + one.string() + " --N 2 --t 1");
  CHECK(r.code == 0);
  CHECK(r.output.find("\"bound_mult\": 1.0") != std::string::npos);

  RunResult h2 = run("bounds --model H2 --N 10");
  CHECK(h2.code == 0);
  CHECK(h2.output.find("\"lambda\"") != std::string::npos);
  CHECK(h2.output.find("\"lambda_prime\"") != std::string::npos);
  CHECK(h2.output.find("\"bound_trunc_step\"") != std::string::npos);
  CHECK(h2.output.find("\"expected_cost\"") != std::string::npos);

  CHECK(run("bounds --model H2 --N 0").code == 2);
}
