#include "cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Topology-aware synthesis of quantum circuits from unitaries"};
  app.require_subcommand(1);

  qsynth::SynthOptions synth;
  CLI::App* cmd_synth = app.add_subcommand(
      "synth", "Search for a minimal-CNOT circuit implementing a unitary");
  cmd_synth->add_option("unitary", synth.unitary_file, "Unitary text file")
      ->required();
  cmd_synth->add_option(
      "--topology", synth.topology,
      "line:N, triangle, or file:PATH (default: line over the input's qubits)");
  cmd_synth->add_option("--gate-set", synth.gate_set, "cnot or crz");
  cmd_synth->add_option("--epsilon", synth.epsilon,
                        "acceptance threshold on hs distance");
  cmd_synth->add_option("--delta", synth.delta,
                        "CNOT budget (negative: default for the register)");
  cmd_synth->add_option("--beam", synth.beam,
                        "frontier nodes popped per iteration");
  cmd_synth->add_option("--slope", synth.slope, "heuristic slope");
  cmd_synth->add_option("--mode", synth.mode, "astar or bfs");
  cmd_synth->add_option("--jobs", synth.jobs,
                        "worker threads (0 = all hardware threads)");
  cmd_synth->add_option("--seed", synth.seed, "rng seed");
  cmd_synth->add_option("--restarts", synth.restarts,
                        "optimizer restarts per node");
  cmd_synth->add_flag("--native", synth.native,
                      "emit rz/rx pulses instead of u3");
  cmd_synth->add_flag("--no-simplify", synth.no_simplify,
                      "keep all three angles on control-line gates");
  cmd_synth->add_flag("--both-orientations", synth.both_orientations,
                      "also search reversed (control, target) placements");
  cmd_synth->add_option("--optimizer", synth.optimizer, "cobyla or cmaes");
  cmd_synth->add_option("--trace", synth.trace_path,
                        "write the per-expansion CSV log here");
  cmd_synth->add_option("--output,-o", synth.output,
                        "circuit file (default: input with .qasm)");
  cmd_synth->set_config("--config", "",
                        "key=value file mirroring these flags");

  qsynth::VerifyOptions verify;
  CLI::App* cmd_verify = app.add_subcommand(
      "verify", "Re-simulate a circuit file against a unitary");
  cmd_verify->add_option("circuit", verify.circuit_file, "Circuit file")
      ->required();
  cmd_verify->add_option("unitary", verify.unitary_file, "Unitary text file")
      ->required();
  cmd_verify->add_option("--trials", verify.trials,
                         "random states for the KL check");
  cmd_verify->add_option("--seed", verify.seed, "rng seed");

  qsynth::FitOptions fit;
  CLI::App* cmd_fit = app.add_subcommand(
      "fit-heuristic",
      "Fit the heuristic slope from uniform-cost search traces");
  cmd_fit->add_option("benchmarks", fit.benchmarks,
                      "benchmark names (qft2, qft3, toffoli, fredkin, peres, "
                      "or, hhl)");
  cmd_fit->add_option("--points", fit.points_file,
                      "fit an existing distance,remaining CSV instead");
  cmd_fit->add_option("--topology", fit.topology,
                      "line or triangle for the 3-qubit benchmarks");
  cmd_fit->add_flag("--affine", fit.affine,
                    "fit slope and intercept instead of through-origin");
  cmd_fit->add_option("--epsilon", fit.epsilon, "acceptance threshold");
  cmd_fit->add_option("--seed", fit.seed, "rng seed");
  cmd_fit->add_option("--jobs", fit.jobs, "worker threads");
  cmd_fit->add_option("--output,-o", fit.output, "report file");
  cmd_fit->set_config("--config", "", "key=value file mirroring these flags");

  qsynth::BenchOptions bench;
  CLI::App* cmd_bench = app.add_subcommand(
      "bench", "Synthesize the built-in benchmark suite and print a table");
  cmd_bench->add_option("--suite", bench.suite,
                        "standard, or a single benchmark name");
  cmd_bench->add_option("--repetitions", bench.repetitions,
                        "runs per cell, best CNOT count wins");
  cmd_bench->add_option("--epsilon", bench.epsilon, "acceptance threshold");
  cmd_bench->add_option("--seed", bench.seed, "rng seed");
  cmd_bench->add_option("--jobs", bench.jobs, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (cmd_synth->parsed()) {
    return qsynth::cmd_synth(synth, std::cout, std::cerr);
  }
  if (cmd_verify->parsed()) {
    return qsynth::cmd_verify(verify, std::cout, std::cerr);
  }
  if (cmd_fit->parsed()) {
    return qsynth::cmd_fit_heuristic(fit, std::cout, std::cerr);
  }
  if (cmd_bench->parsed()) {
    return qsynth::cmd_bench(bench, std::cout, std::cerr);
  }
  return 2;
}
