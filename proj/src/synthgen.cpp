#include "mecsweep/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <numbers>
#include <random>
#include <stdexcept>

#include "json.hpp"

#include "mecsweep/geo.hpp"

namespace mecsweep {
namespace synth {

namespace {

// Generated traces are anchored to a fixed city-scale reference.
constexpr double kBaseLat = 37.7749;
constexpr double kBaseLon = -122.4194;

// Monday 2014-10-06 00:00:00 UTC.
constexpr std::int64_t kBaseEpoch = 1412553600;

// How strongly a station's log-scale deviation sharpens its diurnal
// profile. Positive deviations concentrate traffic (bursty hotspots),
// negative ones flatten it.
constexpr double kBurstCoupling = 1.1;

// Radio capacity bound: the scale draw is winsorized this many sigmas
// above the median so no single cell carries a city's worth of traffic.
constexpr double kScaleCapSigmas = 2.2;

const char* kOtherApps[] = {"COM.WHATSAPP", "COM.ANDROID.CHROME",
                            "COM.INSTAGRAM.ANDROID"};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double normal01(std::mt19937_64& rng) {
  // Box-Muller; u1 kept strictly positive.
  const double u1 =
      (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

geo::PlanePoint disc_point(std::mt19937_64& rng, const geo::PlanePoint& center,
                           double radius) {
  const double r = radius * std::sqrt(uniform01(rng));
  const double theta = 2.0 * std::numbers::pi * uniform01(rng);
  return {center.x + r * std::cos(theta), center.y + r * std::sin(theta)};
}

}  // namespace

std::array<double, 24> default_diurnal_profile() {
  std::array<double, 24> w{};
  double sum = 0.0;
  for (int h = 0; h < 24; ++h) {
    const double d = std::min(std::abs(h - 19), 24 - std::abs(h - 19));
    w[h] = 0.30 + 0.70 * std::exp(-(d * d) / (2.0 * 3.5 * 3.5));
    sum += w[h];
  }
  for (auto& v : w) v /= sum;
  return w;
}

std::vector<std::string> validate(const SynthConfig& c) {
  std::vector<std::string> errors;
  if (c.n_stations < 1) errors.push_back("n_stations must be >= 1");
  if (c.area_width_km <= 0.0 || c.area_height_km <= 0.0) {
    errors.push_back("area dimensions must be positive");
  }
  if (c.duration_hours < 24) errors.push_back("duration_hours must be >= 24");
  if (c.peak_scale_sigma < 0.0) {
    errors.push_back("peak_scale_sigma must be >= 0");
  }
  double profile_sum = 0.0;
  bool profile_neg = false;
  for (const double w : c.diurnal_profile) {
    profile_sum += w;
    profile_neg |= w < 0.0;
  }
  if (profile_neg) errors.push_back("diurnal_profile weights must be >= 0");
  if (std::abs(profile_sum - 1.0) > 1e-6) {
    errors.push_back("diurnal_profile must sum to 1");
  }
  if (c.peak_alignment < 0.0 || c.peak_alignment > 1.0) {
    errors.push_back("peak_alignment must be in [0, 1]");
  }
  double mix_sum = 0.0;
  bool mix_neg = false;
  for (const double p : c.app_mix) {
    mix_sum += p;
    mix_neg |= p < 0.0;
  }
  if (mix_neg) errors.push_back("app_mix probabilities must be >= 0");
  if (std::abs(mix_sum - 1.0) > 1e-6) errors.push_back("app_mix must sum to 1");
  if (c.users_per_station < 1) {
    errors.push_back("users_per_station must be >= 1");
  }
  if (c.coverage_radius_m <= 0.0) {
    errors.push_back("coverage_radius_m must be positive");
  }
  if (c.noise_sigma < 0.0) errors.push_back("noise_sigma must be >= 0");
  if (c.layout == SynthConfig::Layout::kClustered && c.hotspot_count < 1) {
    errors.push_back("hotspot_count must be >= 1 for the clustered layout");
  }
  if (c.hotspot_spread_km <= 0.0 &&
      c.layout == SynthConfig::Layout::kClustered) {
    errors.push_back("hotspot_spread_km must be positive");
  }
  if (c.operator_name.empty()) errors.push_back("operator name must be set");
  return errors;
}

SynthResult generate_trace(const SynthConfig& config) {
  const auto errors = validate(config);
  if (!errors.empty()) {
    std::string joined = "invalid synth config:";
    for (const auto& e : errors) joined += "\n  - " + e;
    throw std::invalid_argument(joined);
  }

  const geo::GeoRef ref{kBaseLat, kBaseLon};
  const double half_w = config.area_width_km * 500.0;  // km -> m, halved
  const double half_h = config.area_height_km * 500.0;

  const int busy_hour = static_cast<int>(
      std::max_element(config.diurnal_profile.begin(),
                       config.diurnal_profile.end()) -
      config.diurnal_profile.begin());

  std::mt19937_64 master(splitmix64(config.seed));
  std::vector<geo::PlanePoint> hotspots;
  if (config.layout == SynthConfig::Layout::kClustered) {
    for (std::size_t k = 0; k < config.hotspot_count; ++k) {
      hotspots.push_back({(2.0 * uniform01(master) - 1.0) * half_w,
                          (2.0 * uniform01(master) - 1.0) * half_h});
    }
  }

  SynthResult result;
  result.busy_hour = busy_hour;
  result.stations.reserve(config.n_stations);

  const int lac_group = 32;  // stations per location area
  char name_buf[32];

  for (std::size_t i = 0; i < config.n_stations; ++i) {
    std::mt19937_64 rng(splitmix64(config.seed ^ splitmix64(i + 1)));

    geo::PlanePoint center;
    if (config.layout == SynthConfig::Layout::kUniform) {
      center = {(2.0 * uniform01(rng) - 1.0) * half_w,
                (2.0 * uniform01(rng) - 1.0) * half_h};
    } else {
      const auto& hs =
          hotspots[static_cast<std::size_t>(uniform01(rng) *
                                            static_cast<double>(
                                                hotspots.size())) %
                   hotspots.size()];
      const double spread = config.hotspot_spread_km * 1000.0;
      center = {std::clamp(hs.x + spread * normal01(rng), -half_w, half_w),
                std::clamp(hs.y + spread * normal01(rng), -half_h, half_h)};
    }

    const double z = std::min(normal01(rng), kScaleCapSigmas);
    const double scale =
        std::exp(config.peak_scale_mu + config.peak_scale_sigma * z);
    const double burst =
        std::exp(kBurstCoupling * z * std::min(config.peak_scale_sigma, 2.0) /
                 2.0);

    const bool aligned = uniform01(rng) < config.peak_alignment;
    const int shift =
        aligned ? 0 : 1 + static_cast<int>(uniform01(rng) * 23.0) % 23;

    // Sharpened, rotated profile normalized so the peak weight is 1:
    // scale is then the station's expected peak hourly load.
    std::array<double, 24> profile{};
    double profile_max = 0.0;
    for (int h = 0; h < 24; ++h) {
      const int base_h = ((h - shift) % 24 + 24) % 24;
      profile[h] = std::pow(config.diurnal_profile[base_h], burst);
      profile_max = std::max(profile_max, profile[h]);
    }
    for (auto& w : profile) w /= profile_max;

    // Per-user traffic shares; observation points scatter freshly inside
    // the coverage disc on every record, as wandering users would.
    std::vector<double> user_weight;
    double weight_sum = 0.0;
    for (std::size_t u = 0; u < config.users_per_station; ++u) {
      user_weight.push_back(0.5 + uniform01(rng));
      weight_sum += user_weight.back();
    }
    for (auto& w : user_weight) w /= weight_sum;

    std::snprintf(name_buf, sizeof(name_buf), "C%05zu", i);
    StationTruth truth;
    truth.cell_id = name_buf;
    std::snprintf(name_buf, sizeof(name_buf), "L%03zu",
                  i / static_cast<std::size_t>(lac_group));
    truth.lac = name_buf;
    const auto center_deg = geo::to_lat_lon(center, ref);
    truth.center_lat = center_deg.lat;
    truth.center_lon = center_deg.lon;
    truth.scale_bytes_per_hour = scale;
    truth.burst_exponent = burst;
    truth.peak_shift_hours = shift;

    for (std::size_t h = 0; h < config.duration_hours; ++h) {
      const double noise =
          std::exp(config.noise_sigma * normal01(rng) -
                   0.5 * config.noise_sigma * config.noise_sigma);
      const double station_load = scale * profile[h % 24] * noise;

      for (std::size_t u = 0; u < config.users_per_station; ++u) {
        const auto bytes = static_cast<std::uint64_t>(
            std::llround(station_load * user_weight[u]));
        if (bytes == 0) continue;

        trace::TraceRecord rec;
        rec.timestamp = kBaseEpoch + static_cast<std::int64_t>(h) * 3600 +
                        static_cast<std::int64_t>(uniform01(rng) * 3600.0) %
                            3600;
        std::snprintf(name_buf, sizeof(name_buf), "u%05zu_%02zu", i, u);
        rec.user_id = name_buf;

        const auto observed =
            disc_point(rng, center, config.coverage_radius_m);
        const auto pos = geo::to_lat_lon(observed, ref);
        rec.lat = pos.lat;
        rec.lon = pos.lon;
        rec.operator_name = config.operator_name;
        rec.cell_id = truth.cell_id;
        rec.lac = truth.lac;

        const double pick = uniform01(rng);
        double acc = 0.0;
        int cat = trace::kNumAppCategories - 1;
        for (int c = 0; c < trace::kNumAppCategories; ++c) {
          acc += config.app_mix[static_cast<std::size_t>(c)];
          if (pick < acc) {
            cat = c;
            break;
          }
        }
        switch (static_cast<trace::AppCategory>(cat)) {
          case trace::AppCategory::kFacebook:
            rec.app = "COM.FACEBOOK.KATANA";
            break;
          case trace::AppCategory::kYouTube:
            rec.app = "COM.GOOGLE.ANDROID.YOUTUBE";
            break;
          case trace::AppCategory::kMaps:
            rec.app = "COM.GOOGLE.ANDROID.APPS.MAPS";
            break;
          default: {
            const auto pick_other = static_cast<std::size_t>(
                uniform01(rng) * std::size(kOtherApps));
            rec.app = kOtherApps[pick_other % std::size(kOtherApps)];
            break;
          }
        }

        const double up_frac = 0.05 + 0.25 * uniform01(rng);
        rec.bytes_up = static_cast<std::uint64_t>(
            std::llround(static_cast<double>(bytes) * up_frac));
        rec.bytes_down = bytes - rec.bytes_up;

        truth.planted_total_bytes += bytes;
        result.records.push_back(std::move(rec));
      }
    }
    result.stations.push_back(std::move(truth));
  }
  return result;
}

std::string ground_truth_json(const SynthConfig& config,
                              const SynthResult& result) {
  nlohmann::json j;
  j["seed"] = config.seed;
  j["n_stations"] = config.n_stations;
  j["operator"] = config.operator_name;
  j["duration_hours"] = config.duration_hours;
  j["busy_hour"] = result.busy_hour;
  j["peak_scale_mu"] = config.peak_scale_mu;
  j["peak_scale_sigma"] = config.peak_scale_sigma;
  j["peak_alignment"] = config.peak_alignment;
  j["coverage_radius_m"] = config.coverage_radius_m;
  j["stations"] = nlohmann::json::array();
  for (const auto& st : result.stations) {
    j["stations"].push_back({
        {"cell_id", st.cell_id},
        {"lac", st.lac},
        {"center_lat", st.center_lat},
        {"center_lon", st.center_lon},
        {"scale_bytes_per_hour", st.scale_bytes_per_hour},
        {"burst_exponent", st.burst_exponent},
        {"peak_shift_hours", st.peak_shift_hours},
        {"planted_total_bytes", st.planted_total_bytes},
    });
  }
  return j.dump(2) + "\n";
}

}  // namespace synth
}  // namespace mecsweep
