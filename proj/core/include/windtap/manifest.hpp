#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "windtap/analysis.hpp"
#include "windtap/flow_model.hpp"
#include "windtap/sensor_emulation.hpp"

namespace windtap {

/// Validation failure that names the offending manifest field.
class ManifestError : public std::runtime_error {
 public:
  ManifestError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct CampaignManifest {
  std::string campaign_id = "campaign";
  std::vector<double> aoa_list;  // deg, sorted; default -10..24 step 2 (18 runs)
  double wind_speed = 40.0;      // m/s
  double air_density = 1.225;    // kg/m^3
  double atmospheric_pressure = 101325.0;  // Pa
  double stagnation_factor = 1.0;
  double duration = 120.0;             // s
  double stationary_duration = 10.0;   // s
  std::uint64_t seed = 1;
  std::vector<BladeState> blade_states{BladeState::clean, BladeState::instrumented};
  std::vector<ChordStation> stations;  // default: 8 taps + 10 mems
  FlowModelParams model;
  FlowModelParams instrumented_model;  // defaults to `model`
  MemsSpec mems;
  ScannerSpec scanner;
  double mems_master_rate = 2000.0;     // Hz, integer multiple of mems rate
  double scanner_master_rate = 2048.0;  // Hz, integer multiple of scanner rate
  double mems_clock_offset = 0.0;       // s, injected stream clock skew
  double scanner_clock_offset = 0.0;    // s

  FlowConditions conditions() const;
};

/// Ten MEMS stations equidistant between the x/c = 0.28 and 0.55 taps, plus
/// eight scanner taps spanning the chord.
std::vector<ChordStation> default_stations();

/// Station label of the fixed `<kind>_xc<0.000>` form used in filenames.
std::string station_label(double x_c, SensorKind kind);

CampaignManifest parse_manifest(const std::string& json_text);
CampaignManifest load_manifest(const std::filesystem::path& path);
std::string manifest_to_json(const CampaignManifest& m);

/// Throws ManifestError naming the first invalid field.
void validate(const CampaignManifest& m);

}  // namespace windtap
