// hamforge: compile Hamiltonian-evolution circuits, verify them against the
// dense oracle, run qDRIFT sweeps, and evaluate the analytic bounds.
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hamforge/cli.hpp"

using namespace hamforge;

int main(int argc, char** argv) {
  CLI::App app{"Hamiltonian-simulation circuit compiler and qDRIFT harness"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file; CLI flags override");
  app.get_config_formatter_base()->valueSeparator('=');

  CompileOptions copt;
  auto* compile = app.add_subcommand("compile", "Group, synthesize, and cost");
  compile->fallthrough();
  compile->add_option("--model", copt.model, "builtin: H2|LiH|heis4|heis6");
  compile->add_option("--hamiltonian", copt.hamiltonian_file,
                      "Hamiltonian text file");
  compile->add_option("--t", copt.t, "evolution time");
  compile->add_option("--eps", copt.eps, "greedy allocation stopping fraction");
  compile->add_option("--seed", copt.seed, "model seed")
      ->envname("HAMFORGE_SEED");
  compile->add_option("--out", copt.out_dir, "output directory");
  compile->add_flag("--no-verify{false}", copt.verify,
                    "skip the unitary oracle check");

  VerifyOptions vopt;
  auto* verify = app.add_subcommand("verify", "Oracle-check fragment circuits");
  verify->fallthrough();
  verify->add_option("--model", vopt.model, "builtin model name");
  verify->add_option("--hamiltonian", vopt.hamiltonian_file,
                     "Hamiltonian text file");
  verify->add_option("--grouping", vopt.grouping_file,
                     "grouping JSON sidecar to check");
  verify->add_option("--trials", vopt.trials, "random t draws per fragment");
  verify->add_option("--seed", vopt.seed, "rng seed")
      ->envname("HAMFORGE_SEED");

  SweepOptions sopt;
  auto* sweep_cmd = app.add_subcommand("sweep", "qDRIFT error/cost sweep");
  sweep_cmd->fallthrough();
  sweep_cmd->add_option("--model", sopt.model, "builtin model name")
      ->required();
  sweep_cmd->add_option("--Ns", sopt.Ns, "iteration counts")
      ->delimiter(',')
      ->required();
  sweep_cmd->add_option("--t", sopt.t, "evolution time");
  sweep_cmd->add_option("--M", sopt.M, "protocol samples");
  sweep_cmd->add_option("--K", sopt.K, "Haar state samples");
  sweep_cmd->add_option("--seed", sopt.seed, "master seed")
      ->envname("HAMFORGE_SEED");
  sweep_cmd->add_option("--target-error", sopt.target_error,
                        "error at which factors are read (0 = auto)");
  sweep_cmd->add_option("--jobs", sopt.jobs, "worker threads");
  sweep_cmd->add_option("--out", sopt.out_csv, "sweep CSV path");
  sweep_cmd->add_option("--summary", sopt.out_summary, "factor summary JSON");

  BoundsOptions bopt;
  auto* bounds = app.add_subcommand("bounds", "Analytic bound evaluation");
  bounds->fallthrough();
  bounds->add_option("--model", bopt.model, "builtin model name");
  bounds->add_option("--hamiltonian", bopt.hamiltonian_file,
                     "Hamiltonian text file");
  bounds->add_option("--t", bopt.t, "evolution time");
  bounds->add_option("--N", bopt.N, "iteration count");
  bounds->add_option("--delta", bopt.delta, "truncation 1-norm");
  bounds->add_option("--eps-c", bopt.eps_c, "cost-bound confidence");
  bounds->add_option("--seed", bopt.seed, "model seed")
      ->envname("HAMFORGE_SEED");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  if (compile->parsed()) return cmd_compile(copt, std::cout).exit_code;
  if (verify->parsed()) return cmd_verify(vopt, std::cout).exit_code;
  if (sweep_cmd->parsed()) return cmd_sweep(sopt, std::cout).exit_code;
  if (bounds->parsed()) return cmd_bounds(bopt, std::cout).exit_code;
  return kExitInput;
}
