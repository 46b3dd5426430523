#include <iostream>

#include "CLI11.hpp"
#include "enduse/cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace enduse::cli;
  CLI::App app{"enduse: appliance usage models and building end-use simulation"};
  app.require_subcommand(1);
  Options opt;

  const auto common = [&](CLI::App* sub, const char* input_help) {
    sub->add_option("--config", opt.config_path, "run configuration (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--seed", opt.seed, "random seed (overrides config)");
    sub->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
    if (input_help) sub->add_option("input", opt.input, input_help);
  };

  auto* ingest = app.add_subcommand("ingest", "threshold power traces into a state CSV");
  common(ingest, "power CSV");
  ingest->add_option("--threshold", opt.threshold, "ON when watts exceed this value");

  auto* estimate = app.add_subcommand("estimate", "estimate per-class profiles and diagnostics");
  common(estimate, "state CSV");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo simulation of the configured building");
  common(simulate, "directory holding <class>.profile.json");
  simulate->add_option("--runs", opt.runs, "Monte Carlo runs (overrides config)");
  simulate->add_flag("--plot", opt.plot, "also write SVG charts");

  auto* validate = app.add_subcommand("validate", "run the self-checks on observed or synthetic data");
  common(validate, "state CSV (synthetic data when omitted)");
  validate->add_option("--runs", opt.runs, "Monte Carlo runs (overrides config)");

  auto* synth = app.add_subcommand("synth", "write synthetic observations from built-in profiles");
  common(synth, nullptr);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  const auto run = [&](auto cmd) { return run_guarded([&] { return cmd(opt, std::cout, std::cerr); }, std::cerr); };
  try {
    if (*ingest) return run(cmd_ingest);
    if (*estimate) return run(cmd_estimate);
    if (*simulate) return run(cmd_simulate);
    if (*validate) return run(cmd_validate);
    if (*synth) return run(cmd_synth);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kConfigError;
}
