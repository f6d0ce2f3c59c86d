#include "windtap/flow_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "windtap/rng.hpp"

namespace windtap {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be finite");
  }
}

}  // namespace

FlowConditions FlowConditions::make(double wind_speed, double air_density,
                                    double atmospheric_pressure,
                                    double stagnation_factor, double chord_m,
                                    double kinematic_viscosity,
                                    double speed_of_sound) {
  require_finite(wind_speed, "wind_speed");
  require_finite(air_density, "air_density");
  require_finite(atmospheric_pressure, "atmospheric_pressure");
  require_finite(stagnation_factor, "stagnation_factor");
  if (wind_speed < 0.0) throw std::invalid_argument("wind_speed must be >= 0");
  if (!(air_density > 0.0)) throw std::invalid_argument("air_density must be > 0");
  if (!(atmospheric_pressure > 0.0)) {
    throw std::invalid_argument("atmospheric_pressure must be > 0");
  }
  FlowConditions fc;
  fc.wind_speed = wind_speed;
  fc.air_density = air_density;
  fc.atmospheric_pressure = atmospheric_pressure;
  fc.stagnation_factor = stagnation_factor;
  fc.dynamic_pressure = windtap::dynamic_pressure(air_density, wind_speed);
  fc.free_stream_pressure = atmospheric_pressure - stagnation_factor * fc.dynamic_pressure;
  fc.reynolds = wind_speed * chord_m / kinematic_viscosity;
  fc.mach = wind_speed / speed_of_sound;
  return fc;
}

void FlowModelParams::validate() const {
  if (!(te_separation_aoa < full_separation_aoa)) {
    throw std::invalid_argument("te_separation_aoa must be below full_separation_aoa");
  }
  if (!(blend_width > 0.0)) throw std::invalid_argument("blend_width must be > 0");
  if (!(peak_width > 0.0)) throw std::invalid_argument("peak_width must be > 0");
  if (base_std < 0.0 || peak_std < 0.0 || stall_std < 0.0) {
    throw std::invalid_argument("fluctuation levels must be >= 0");
  }
  if (!(plateau_pressure < 0.0)) {
    throw std::invalid_argument("plateau_pressure must be negative (suction)");
  }
  if (!(fluctuation_cutoff_hz > 0.0)) {
    throw std::invalid_argument("fluctuation_cutoff must be > 0");
  }
}

std::string to_string(SensorKind kind) {
  return kind == SensorKind::mems ? "mems" : "tap";
}

SensorKind sensor_kind_from_string(const std::string& s) {
  if (s == "mems") return SensorKind::mems;
  if (s == "tap") return SensorKind::tap;
  throw std::invalid_argument("unknown sensor kind '" + s + "'");
}

void validate(const ChordStation& station) {
  if (!(station.x_c >= 0.0 && station.x_c <= 1.0)) {
    throw std::invalid_argument("station '" + station.label + "': x_c outside [0, 1]");
  }
}

double dynamic_pressure(double air_density, double wind_speed) {
  require_finite(air_density, "air_density");
  require_finite(wind_speed, "wind_speed");
  if (!(air_density > 0.0)) throw std::invalid_argument("air_density must be > 0");
  if (wind_speed < 0.0) throw std::invalid_argument("wind_speed must be >= 0");
  return 0.5 * air_density * wind_speed * wind_speed;
}

double separation_front(double aoa_deg, const FlowModelParams& params) {
  params.validate();
  if (aoa_deg <= params.te_separation_aoa) return 1.0;
  const double span = params.full_separation_aoa - params.te_separation_aoa;
  const double x = 1.0 - (aoa_deg - params.te_separation_aoa) / span;
  return std::clamp(x, 0.0, 1.0);
}

double mean_pressure(const ChordStation& station, double aoa_deg,
                     [[maybe_unused]] const FlowConditions& fc,
                     const FlowModelParams& params) {
  params.validate();
  validate(station);
  const double x = station.x_c;
  const double x_sep = separation_front(aoa_deg, params);
  const double slope = -(params.slope_s0 - params.slope_s1 * x);
  const double attached = slope * aoa_deg + params.offset_pressure;
  const double w = 1.0 / (1.0 + std::exp(-(x - x_sep) / params.blend_width));
  return w * params.plateau_pressure + (1.0 - w) * attached;
}

double fluctuation_std(const ChordStation& station, double aoa_deg,
                       const FlowModelParams& params) {
  params.validate();
  validate(station);
  if (aoa_deg < params.te_separation_aoa) return params.base_std;
  if (aoa_deg >= params.full_separation_aoa) return params.base_std + params.stall_std;
  const double x_sep = separation_front(aoa_deg, params);
  const double u = (station.x_c - x_sep) / params.peak_width;
  return params.base_std + params.peak_std * std::exp(-u * u);
}

TimeSeries ground_truth_series(const ChordStation& station, double aoa_deg,
                               const FlowConditions& fc,
                               const FlowModelParams& params, double duration_s,
                               double master_rate_hz, std::uint64_t seed) {
  params.validate();
  if (!(duration_s > 0.0)) throw std::invalid_argument("duration must be > 0");
  if (!(master_rate_hz >= 2.0 * params.fluctuation_cutoff_hz)) {
    throw std::invalid_argument("master_rate must be >= 2 * fluctuation_cutoff");
  }
  const double n_real = duration_s * master_rate_hz;
  constexpr double kSampleBudget = 1.0e9;
  if (!(n_real <= kSampleBudget)) {
    throw std::invalid_argument("duration * master_rate exceeds the sample budget");
  }
  const auto n = static_cast<std::size_t>(std::llround(n_real));

  TimeSeries ts;
  ts.channel = station.label;
  ts.start_time = 0.0;
  ts.sample_rate = master_rate_hz;
  const double mean = mean_pressure(station, aoa_deg, fc, params);
  const double sigma = fluctuation_std(station, aoa_deg, params);
  if (sigma == 0.0) {
    ts.values.assign(n, mean);
    return ts;
  }
  NoiseGen gen(seed);
  ts.values = gen.ar1_unit(n, params.fluctuation_cutoff_hz, master_rate_hz);
  for (auto& v : ts.values) v = mean + sigma * v;
  return ts;
}

}  // namespace windtap
