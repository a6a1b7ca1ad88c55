#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dacq/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Budget-constrained data acquisition strategies for ML models"};
  app.set_version_flag("--version", dacq::kToolVersion);
  app.require_subcommand(1);

  dacq::SynthOptions synth;
  std::string synth_task = "clf";
  auto* cmd_synth = app.add_subcommand("synth", "Generate a synthetic dataset CSV");
  cmd_synth->add_option("--task", synth_task, "Task kind: clf | reg")
      ->check(CLI::IsMember({"clf", "reg"}));
  cmd_synth->add_option("--classes", synth.spec.classes, "Number of classes (clf)");
  cmd_synth->add_option("--cells", synth.spec.cells_per_dim, "Skew cells per dimension (reg)");
  cmd_synth->add_option("--size", synth.spec.size, "Pool size");
  cmd_synth->add_option("--sep", synth.spec.separation, "Cluster separation in sigmas");
  cmd_synth->add_option("--noise", synth.spec.noise,
                        "Label-flip probability (clf) or target noise sigma (reg)");
  cmd_synth->add_option("--skew", synth.spec.skew, "Power-law exponent on group sizes");
  cmd_synth->add_option("--seed", synth.seed, "Generator seed");
  cmd_synth->add_option("--out", synth.out, "Output CSV path")->required();

  dacq::RunOptions run;
  auto* cmd_run = app.add_subcommand("run", "Run an experiment from a JSON config");
  cmd_run->add_option("--config", run.config_path, "Config JSON path")->required();
  cmd_run->add_option("--out-dir", run.out_dir, "Output directory")->required();
  cmd_run->add_option("--jobs", run.jobs, "Concurrent repetitions")->check(CLI::PositiveNumber);

  dacq::CompareOptions compare;
  auto* cmd_compare = app.add_subcommand("compare", "Compare two results.csv files");
  cmd_compare->add_option("a", compare.results_a, "First results.csv")->required();
  cmd_compare->add_option("b", compare.results_b, "Second results.csv")->required();

  CLI11_PARSE(app, argc, argv);

  if (cmd_synth->parsed()) {
    synth.spec.task = synth_task == "clf" ? dacq::Task::Classification : dacq::Task::Regression;
    return dacq::cmd_synth(synth);
  }
  if (cmd_run->parsed()) return dacq::cmd_run(run);
  return dacq::cmd_compare(compare, std::cout);
}
