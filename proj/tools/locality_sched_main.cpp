#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "locality_sched/config.hpp"
#include "locality_sched/sweep.hpp"

namespace {

void write_output(const std::string& text, const std::optional<std::string>& path) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file \"" + *path + "\"");
  out << text;
  if (!out) throw std::runtime_error("failed writing \"" + *path + "\"");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"locality-sched: discrete-time simulator for data-locality scheduling policies"};
  app.require_subcommand(1);

  std::string config_path;
  std::int64_t horizon_override = 0;
  std::vector<std::uint64_t> seeds_override;
  std::string out_override;

  CLI::App* run = app.add_subcommand("run", "Run the configured load sweep and emit CSV rows");
  run->add_option("config", config_path, "JSON experiment config")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--horizon", horizon_override, "Override the config horizon (slots)");
  run->add_option("--seeds", seeds_override, "Override the config seed list")->delimiter(',');
  run->add_option("--out", out_override, "Write CSV here instead of the config output path");

  CLI::App* capacity =
      app.add_subcommand("capacity", "Print z*, rho* and the optimal load decomposition");
  capacity->add_option("config", config_path, "JSON experiment config")
      ->required()
      ->check(CLI::ExistingFile);
  capacity->add_option("--out", out_override, "Write the report here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    locsched::ExperimentConfig cfg = locsched::parse_config(config_path);
    if (run->parsed()) {
      if (horizon_override > 0) {
        cfg.horizon = horizon_override;
        if (!cfg.warmup_explicit) cfg.warmup = cfg.horizon / 5;
        if (cfg.warmup >= cfg.horizon)
          throw std::invalid_argument("--horizon must stay above the configured warmup");
      }
      if (!seeds_override.empty()) cfg.seeds = seeds_override;
      std::optional<std::string> out = cfg.output_path;
      if (!out_override.empty()) out = out_override;
      write_output(locsched::sweep_to_csv(locsched::run_sweep(cfg)), out);
    } else {
      std::optional<std::string> out;
      if (!out_override.empty()) out = out_override;
      write_output(locsched::capacity_report(cfg), out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
