#ifndef MECSWEEP_SYNTHGEN_HPP
#define MECSWEEP_SYNTHGEN_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mecsweep/trace.hpp"

namespace mecsweep {
namespace synth {

// Default 24-hour shape: a broad evening bump peaking at 19:00 over a
// constant floor, normalized to sum to 1.
std::array<double, 24> default_diurnal_profile();

struct SynthConfig {
  std::uint64_t seed = 0;
  std::size_t n_stations = 100;
  double area_width_km = 10.0;
  double area_height_km = 10.0;

  enum class Layout { kUniform, kClustered };
  Layout layout = Layout::kUniform;
  std::size_t hotspot_count = 5;    // clustered layout only
  double hotspot_spread_km = 1.0;   // clustered layout only

  std::size_t duration_hours = 168;

  // Station peak scale in bytes/hour is log-normal(mu, sigma). sigma also
  // drives burst heterogeneity: heavier stations concentrate their
  // traffic into fewer hours, lighter ones spread it out.
  double peak_scale_mu = 17.0;  // ln(bytes/hour); exp(17) ~ 24 MB/h
  double peak_scale_sigma = 1.0;

  std::array<double, 24> diurnal_profile = default_diurnal_profile();

  // Probability that a station's daily peak falls in the global busy hour
  // (the profile's argmax) rather than a random other hour.
  double peak_alignment = 0.7;

  // Probability per category, indexed like AppCategory (facebook,
  // youtube, maps, other); must sum to 1.
  std::array<double, trace::kNumAppCategories> app_mix = {0.25, 0.35, 0.10,
                                                          0.30};

  std::size_t users_per_station = 6;
  double coverage_radius_m = 150.0;  // users scatter within this disc
  double noise_sigma = 0.35;         // per-bin log-normal noise
  std::string operator_name = "SYNTH";
};

// Empty when the config is valid; otherwise one message per violation.
std::vector<std::string> validate(const SynthConfig& config);

// Planted per-station ground truth, emitted as a sidecar for oracle tests.
struct StationTruth {
  std::string cell_id;
  std::string lac;
  double center_lat = 0.0;
  double center_lon = 0.0;
  double scale_bytes_per_hour = 0.0;  // log-normal draw S_i
  double burst_exponent = 1.0;        // profile sharpening gamma_i
  int peak_shift_hours = 0;           // 0 = aligned with the busy hour
  std::uint64_t planted_total_bytes = 0;  // exact sum of emitted bytes
};

struct SynthResult {
  std::vector<trace::TraceRecord> records;
  std::vector<StationTruth> stations;
  int busy_hour = 0;
};

// Deterministic given config.seed; per-station draws use derived
// sub-seeds, so station streams are independent of each other.
// Throws std::invalid_argument listing violations on an invalid config.
SynthResult generate_trace(const SynthConfig& config);

// Ground-truth sidecar as a JSON string (pretty-printed, trailing newline).
std::string ground_truth_json(const SynthConfig& config,
                              const SynthResult& result);

}  // namespace synth
}  // namespace mecsweep

#endif  // MECSWEEP_SYNTHGEN_HPP
