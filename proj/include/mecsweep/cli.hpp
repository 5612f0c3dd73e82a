#ifndef MECSWEEP_CLI_HPP
#define MECSWEEP_CLI_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mecsweep/synthgen.hpp"
#include "mecsweep/trace.hpp"

namespace mecsweep {
namespace cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitBadInput = 2;

struct RunOptions {
  std::vector<std::string> inputs;
  std::string out_dir;
  std::optional<std::string> operator_filter;
  trace::AppCategory app = trace::AppCategory::kTotal;
  std::vector<double> dmax_grid;  // empty -> default_dmax_grid()
  bool randomize = false;
  std::uint64_t seed = 1;
  bool per_cell_max = false;
  bool emit_clusters = false;  // sweep: also write per-threshold clusters
};

// 0 plus 40 log-spaced thresholds in [50 m, 50 km].
std::vector<double> default_dmax_grid();

// Station GeoJSON per operator plus a dataset summary (record counts,
// unique users/cells, coverage box, total bytes).
int run_reconstruct(const RunOptions& options);

// Sweep CSV per operator, optionally with the randomized-load baseline
// alongside.
int run_sweep(const RunOptions& options);

// Peak-load CDF, neighbor peak-ratio distribution, and the per-cell
// disparity fraction per operator.
int run_stats(const RunOptions& options);

// Generates a synthetic trace from a key-value config file; writes the
// trace and its ground-truth sidecar into out_dir.
int run_synth(const std::string& config_path, const std::string& out_dir);

// Key-value synth config parser ("key = value", '#' comments). Throws
// std::invalid_argument listing every problem, including a missing seed.
synth::SynthConfig parse_synth_config(const std::string& path,
                                      std::string* format_out = nullptr);

}  // namespace cli
}  // namespace mecsweep

#endif  // MECSWEEP_CLI_HPP
