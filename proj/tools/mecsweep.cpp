#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "mecsweep/cli.hpp"

namespace {

void add_common_options(CLI::App* cmd, mecsweep::cli::RunOptions* options,
                        std::string* app_name) {
  cmd->add_option("-i,--input", options->inputs,
                  "Trace file(s), CSV or JSONL by extension")
      ->required();
  cmd->add_option("-o,--out", options->out_dir, "Output directory")
      ->required();
  cmd->add_option("--operator", options->operator_filter,
                  "Process only this operator");
  cmd->add_option("--app", *app_name,
                  "App filter: facebook|youtube|maps|other|total")
      ->default_val("total");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Trace-driven analyzer for edge-server placement: reconstructs base "
      "stations from mobile records, clusters them under a distance cap, "
      "and reports the distance vs. utilization trade-off."};
  app.require_subcommand(1);

  mecsweep::cli::RunOptions options;
  std::string app_name = "total";
  std::string config_path;
  std::string synth_out;

  auto* reconstruct = app.add_subcommand(
      "reconstruct", "Reconstruct stations; write GeoJSON and a summary");
  add_common_options(reconstruct, &options, &app_name);

  auto* sweep = app.add_subcommand(
      "sweep", "Efficiency and cluster counts across a d_max grid");
  add_common_options(sweep, &options, &app_name);
  sweep->add_option("--dmax-grid", options.dmax_grid,
                    "Comma-separated thresholds in meters, ascending")
      ->delimiter(',');
  sweep->add_flag("--randomize", options.randomize,
                  "Also sweep a uniform-random load baseline");
  sweep->add_option("--seed", options.seed, "Seed for --randomize")
      ->default_val(1);
  sweep->add_flag("--per-cell-max", options.per_cell_max,
                  "Randomize within each station's own maximum");
  sweep->add_flag("--emit-clusters", options.emit_clusters,
                  "Write per-threshold cluster GeoJSON and membership");

  auto* stats = app.add_subcommand(
      "stats", "Peak-load distribution and neighbor peak ratios");
  add_common_options(stats, &options, &app_name);

  auto* synth = app.add_subcommand(
      "synth", "Generate a synthetic trace from a config file");
  synth->add_option("-c,--config", config_path, "Key-value config file")
      ->required();
  synth->add_option("-o,--out", synth_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return mecsweep::cli::kExitBadInput;
  }

  try {
    options.app = mecsweep::trace::category_from_name(app_name);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mecsweep::cli::kExitBadInput;
  }

  try {
    if (reconstruct->parsed()) return mecsweep::cli::run_reconstruct(options);
    if (sweep->parsed()) return mecsweep::cli::run_sweep(options);
    if (stats->parsed()) return mecsweep::cli::run_stats(options);
    if (synth->parsed()) {
      return mecsweep::cli::run_synth(config_path, synth_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return mecsweep::cli::kExitInternal;
  }
  return mecsweep::cli::kExitInternal;
}
