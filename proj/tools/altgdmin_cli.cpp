// Experiment runner for the low-rank recovery solvers.
//
// Verbs:
//   run      one experiment -> trace.csv, summary.json (+ messages.csv)
//   sweep    cartesian sweep over m / p / c_eta / seeds -> sweep.csv
//   compare  paired-by-seed solver comparison -> comparison.csv
//   inspect  summarize an existing trace.csv
//
// Exit codes: 0 success, 1 configuration error, 2 solver error.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "altgdmin/errors.hpp"
#include "altgdmin/exp/experiment.hpp"
#include "altgdmin/util/parallel.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
};

altgdmin::ExperimentConfig load_with_overrides(const CommonArgs& args) {
  altgdmin::ExperimentConfig cfg =
      altgdmin::load_experiment_config(args.config_path);
  if (args.seed_set) cfg.seed = args.seed;
  if (args.threads > 0) cfg.solver_config.threads = args.threads;
  if (altgdmin::reference_mode()) cfg.solver_config.threads = 1;
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_config = true) {
  cmd->add_option("--config", args.config_path, "experiment config (JSON)")
      ->required(needs_config);
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "override the config seed")
      ->each([&args](const std::string&) { args.seed_set = true; });
  cmd->add_option("--threads", args.threads,
                  "worker threads (ALTGDMIN_REFERENCE_MODE=1 forces 1)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"low-rank matrix recovery experiments (AltGDmin)"};
  app.require_subcommand(1);

  CommonArgs run_args, sweep_args, compare_args;
  std::string inspect_path;

  CLI::App* run_cmd = app.add_subcommand("run", "run one experiment");
  add_common(run_cmd, run_args);
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep");
  add_common(sweep_cmd, sweep_args);
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "compare solvers on paired instances");
  add_common(compare_cmd, compare_args);
  CLI::App* inspect_cmd =
      app.add_subcommand("inspect", "summarize a trace.csv");
  inspect_cmd->add_option("trace", inspect_path, "path to trace.csv")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      const altgdmin::ExperimentConfig cfg = load_with_overrides(run_args);
      const altgdmin::ExperimentOutcome out =
          altgdmin::run_experiment(cfg, run_args.out_dir);
      if (!out.error.empty()) {
        std::cerr << "solver error: " << out.error << "\n";
        return 2;
      }
      std::fprintf(stderr,
                   "done: %d iterations, final_error %.3e, %.2fs wall\n",
                   out.trace.iterations(), out.final_error,
                   out.trace.total_seconds());
    } else if (sweep_cmd->parsed()) {
      const altgdmin::ExperimentConfig cfg = load_with_overrides(sweep_args);
      const altgdmin::SweepResult res =
          altgdmin::run_sweep(cfg, sweep_args.out_dir);
      std::fprintf(stderr, "sweep: %zu cells written\n", res.cells.size());
    } else if (compare_cmd->parsed()) {
      const altgdmin::ExperimentConfig cfg = load_with_overrides(compare_args);
      const altgdmin::CompareResult res =
          altgdmin::run_compare(cfg, compare_args.out_dir);
      std::fprintf(stderr, "compare: %zu rows written\n", res.rows.size());
    } else if (inspect_cmd->parsed()) {
      std::cout << altgdmin::inspect_trace(inspect_path);
    }
  } catch (const altgdmin::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const altgdmin::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 1;
  } catch (const altgdmin::Error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
