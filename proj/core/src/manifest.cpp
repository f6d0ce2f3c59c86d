#include "windtap/manifest.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace windtap {

using nlohmann::json;

namespace {

double get_num(const json& j, const std::string& field, double fallback) {
  if (!j.contains(field)) return fallback;
  if (!j[field].is_number()) throw ManifestError(field, "must be a number");
  return j[field].get<double>();
}

FlowModelParams parse_model(const json& j, const std::string& prefix,
                            const FlowModelParams& base) {
  FlowModelParams p = base;
  if (j.contains("linear_regime")) {
    const auto& lr = j["linear_regime"];
    if (!lr.is_array() || lr.size() != 2) {
      throw ManifestError(prefix + ".linear_regime", "must be [min, max]");
    }
    p.linear_aoa_min = lr[0].get<double>();
    p.linear_aoa_max = lr[1].get<double>();
  }
  p.te_separation_aoa = get_num(j, "te_separation_aoa", p.te_separation_aoa);
  p.full_separation_aoa = get_num(j, "full_separation_aoa", p.full_separation_aoa);
  p.plateau_pressure = get_num(j, "plateau_pressure", p.plateau_pressure);
  if (j.contains("slope_coeffs")) {
    const auto& sc = j["slope_coeffs"];
    if (!sc.is_array() || sc.size() != 2) {
      throw ManifestError(prefix + ".slope_coeffs", "must be [s0, s1]");
    }
    p.slope_s0 = sc[0].get<double>();
    p.slope_s1 = sc[1].get<double>();
  }
  p.offset_pressure = get_num(j, "offset_pressure", p.offset_pressure);
  p.blend_width = get_num(j, "blend_width", p.blend_width);
  p.base_std = get_num(j, "base_std", p.base_std);
  p.peak_std = get_num(j, "peak_std", p.peak_std);
  p.peak_width = get_num(j, "peak_width", p.peak_width);
  p.stall_std = get_num(j, "stall_std", p.stall_std);
  p.fluctuation_cutoff_hz = get_num(j, "fluctuation_cutoff", p.fluctuation_cutoff_hz);
  return p;
}

json model_to_json(const FlowModelParams& p) {
  return json{{"linear_regime", {p.linear_aoa_min, p.linear_aoa_max}},
              {"te_separation_aoa", p.te_separation_aoa},
              {"full_separation_aoa", p.full_separation_aoa},
              {"plateau_pressure", p.plateau_pressure},
              {"slope_coeffs", {p.slope_s0, p.slope_s1}},
              {"offset_pressure", p.offset_pressure},
              {"blend_width", p.blend_width},
              {"base_std", p.base_std},
              {"peak_std", p.peak_std},
              {"peak_width", p.peak_width},
              {"stall_std", p.stall_std},
              {"fluctuation_cutoff", p.fluctuation_cutoff_hz}};
}

bool integer_ratio(double hi, double lo) {
  if (!(hi > 0.0) || !(lo > 0.0)) return false;
  const double q = hi / lo;
  return std::abs(q - std::round(q)) < 1e-9 * q && q >= 1.0 - 1e-12;
}

}  // namespace

FlowConditions CampaignManifest::conditions() const {
  return FlowConditions::make(wind_speed, air_density, atmospheric_pressure,
                              stagnation_factor);
}

std::string station_label(double x_c, SensorKind kind) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s_xc%.3f", to_string(kind).c_str(), x_c);
  return buf;
}

std::vector<ChordStation> default_stations() {
  std::vector<ChordStation> stations;
  const double taps[] = {0.10, 0.20, 0.28, 0.40, 0.55, 0.65, 0.75, 0.85};
  for (double x : taps) {
    stations.push_back({x, SensorKind::tap, station_label(x, SensorKind::tap)});
  }
  // Ten MEMS stations equidistant between the 0.28 and 0.55 taps
  // (0.03 chord spacing, the 37 mm pitch on a 1.25 m chord).
  for (int i = 0; i < 10; ++i) {
    const double x = 0.28 + 0.03 * i;
    stations.push_back({x, SensorKind::mems, station_label(x, SensorKind::mems)});
  }
  return stations;
}

CampaignManifest parse_manifest(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ManifestError("<document>", e.what());
  }
  if (!j.is_object()) throw ManifestError("<document>", "manifest must be a JSON object");

  CampaignManifest m;
  if (j.contains("campaign_id")) {
    if (!j["campaign_id"].is_string()) throw ManifestError("campaign_id", "must be a string");
    m.campaign_id = j["campaign_id"].get<std::string>();
  }
  if (j.contains("aoa_list")) {
    if (!j["aoa_list"].is_array()) throw ManifestError("aoa_list", "must be an array");
    m.aoa_list.clear();
    for (const auto& a : j["aoa_list"]) {
      if (!a.is_number()) throw ManifestError("aoa_list", "entries must be numbers");
      m.aoa_list.push_back(a.get<double>());
    }
  }
  if (m.aoa_list.empty()) {
    for (int a = -10; a <= 24; a += 2) m.aoa_list.push_back(a);  // 18 runs
  }
  m.wind_speed = get_num(j, "wind_speed", m.wind_speed);
  m.air_density = get_num(j, "air_density", m.air_density);
  m.atmospheric_pressure = get_num(j, "atmospheric_pressure", m.atmospheric_pressure);
  m.stagnation_factor = get_num(j, "stagnation_factor", m.stagnation_factor);
  m.duration = get_num(j, "duration", m.duration);
  m.stationary_duration = get_num(j, "stationary_duration", m.stationary_duration);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer() && !j["seed"].is_number_unsigned()) {
      throw ManifestError("seed", "must be an integer");
    }
    m.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("blade_states")) {
    if (!j["blade_states"].is_array()) throw ManifestError("blade_states", "must be an array");
    m.blade_states.clear();
    for (const auto& s : j["blade_states"]) {
      try {
        m.blade_states.push_back(blade_state_from_string(s.get<std::string>()));
      } catch (const std::exception& e) {
        throw ManifestError("blade_states", e.what());
      }
    }
  }
  if (j.contains("stations")) {
    if (!j["stations"].is_array()) throw ManifestError("stations", "must be an array");
    for (const auto& s : j["stations"]) {
      ChordStation st;
      if (!s.contains("x_c") || !s["x_c"].is_number()) {
        throw ManifestError("stations", "every station needs a numeric x_c");
      }
      st.x_c = s["x_c"].get<double>();
      try {
        st.kind = sensor_kind_from_string(s.value("kind", "mems"));
      } catch (const std::exception& e) {
        throw ManifestError("stations", e.what());
      }
      st.label = s.value("label", station_label(st.x_c, st.kind));
      m.stations.push_back(std::move(st));
    }
  } else {
    m.stations = default_stations();
  }
  if (j.contains("model")) m.model = parse_model(j["model"], "model", FlowModelParams{});
  m.instrumented_model = j.contains("instrumented_model")
                             ? parse_model(j["instrumented_model"], "instrumented_model", m.model)
                             : m.model;
  if (j.contains("mems")) {
    const auto& s = j["mems"];
    m.mems.sample_rate = get_num(s, "sample_rate", m.mems.sample_rate);
    m.mems.noise_rms = get_num(s, "noise_rms", m.mems.noise_rms);
    m.mems.offset_bound = get_num(s, "offset_bound", m.mems.offset_bound);
    m.mems.power_per_sensor_mw = get_num(s, "power_per_sensor", m.mems.power_per_sensor_mw);
    m.mems.height_mm = get_num(s, "height", m.mems.height_mm);
  }
  if (j.contains("scanner")) {
    const auto& s = j["scanner"];
    m.scanner.sample_rate = get_num(s, "sample_rate", m.scanner.sample_rate);
    m.scanner.noise_rms = get_num(s, "noise_rms", m.scanner.noise_rms);
    m.scanner.accuracy_bound = get_num(s, "accuracy_bound", m.scanner.accuracy_bound);
    m.scanner.tube_natural_freq_hz =
        get_num(s, "tube_natural_freq", m.scanner.tube_natural_freq_hz);
    m.scanner.tube_damping = get_num(s, "tube_damping", m.scanner.tube_damping);
    m.scanner.characterization_rate_hz =
        get_num(s, "characterization_rate", m.scanner.characterization_rate_hz);
  }
  m.mems_master_rate = get_num(j, "mems_master_rate", m.mems_master_rate);
  m.scanner_master_rate = get_num(j, "scanner_master_rate", m.scanner_master_rate);
  m.mems_clock_offset = get_num(j, "mems_clock_offset", m.mems_clock_offset);
  m.scanner_clock_offset = get_num(j, "scanner_clock_offset", m.scanner_clock_offset);

  validate(m);
  return m;
}

CampaignManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

std::string manifest_to_json(const CampaignManifest& m) {
  json j;
  j["campaign_id"] = m.campaign_id;
  j["aoa_list"] = m.aoa_list;
  j["wind_speed"] = m.wind_speed;
  j["air_density"] = m.air_density;
  j["atmospheric_pressure"] = m.atmospheric_pressure;
  j["stagnation_factor"] = m.stagnation_factor;
  j["duration"] = m.duration;
  j["stationary_duration"] = m.stationary_duration;
  j["seed"] = m.seed;
  json states = json::array();
  for (auto s : m.blade_states) states.push_back(to_string(s));
  j["blade_states"] = states;
  json stations = json::array();
  for (const auto& st : m.stations) {
    stations.push_back({{"x_c", st.x_c}, {"kind", to_string(st.kind)}, {"label", st.label}});
  }
  j["stations"] = stations;
  j["model"] = model_to_json(m.model);
  j["instrumented_model"] = model_to_json(m.instrumented_model);
  j["mems"] = {{"sample_rate", m.mems.sample_rate},
               {"noise_rms", m.mems.noise_rms},
               {"offset_bound", m.mems.offset_bound},
               {"power_per_sensor", m.mems.power_per_sensor_mw},
               {"height", m.mems.height_mm}};
  j["scanner"] = {{"sample_rate", m.scanner.sample_rate},
                  {"noise_rms", m.scanner.noise_rms},
                  {"accuracy_bound", m.scanner.accuracy_bound},
                  {"tube_natural_freq", m.scanner.tube_natural_freq_hz},
                  {"tube_damping", m.scanner.tube_damping},
                  {"characterization_rate", m.scanner.characterization_rate_hz}};
  j["mems_master_rate"] = m.mems_master_rate;
  j["scanner_master_rate"] = m.scanner_master_rate;
  j["mems_clock_offset"] = m.mems_clock_offset;
  j["scanner_clock_offset"] = m.scanner_clock_offset;
  return j.dump(2);
}

void validate(const CampaignManifest& m) {
  if (m.campaign_id.empty()) throw ManifestError("campaign_id", "must not be empty");
  if (m.aoa_list.empty()) throw ManifestError("aoa_list", "must not be empty");
  for (std::size_t i = 0; i < m.aoa_list.size(); ++i) {
    const double a = m.aoa_list[i];
    if (!(a >= -90.0 && a <= 90.0)) {
      throw ManifestError("aoa_list[" + std::to_string(i) + "]",
                          "angle " + std::to_string(a) + " outside [-90, 90]");
    }
    if (i > 0 && !(a > m.aoa_list[i - 1])) {
      throw ManifestError("aoa_list[" + std::to_string(i) + "]",
                          "angles must be strictly increasing");
    }
  }
  if (!(m.wind_speed >= 0.0)) throw ManifestError("wind_speed", "must be >= 0");
  if (!(m.air_density > 0.0)) throw ManifestError("air_density", "must be > 0");
  if (!(m.atmospheric_pressure > 0.0)) {
    throw ManifestError("atmospheric_pressure", "must be > 0");
  }
  if (!(m.duration > 0.0)) throw ManifestError("duration", "must be > 0");
  if (!(m.stationary_duration >= 10.0)) {
    throw ManifestError("stationary_duration", "must be >= 10 s (atmospheric reference)");
  }
  if (m.blade_states.empty()) throw ManifestError("blade_states", "must not be empty");
  {
    std::set<std::string> seen;
    for (auto s : m.blade_states) {
      if (!seen.insert(to_string(s)).second) {
        throw ManifestError("blade_states", "duplicate state '" + to_string(s) + "'");
      }
    }
  }
  if (m.stations.empty()) throw ManifestError("stations", "must not be empty");
  for (std::size_t i = 0; i < m.stations.size(); ++i) {
    const auto& st = m.stations[i];
    if (!(st.x_c >= 0.0 && st.x_c <= 1.0)) {
      throw ManifestError("stations[" + std::to_string(i) + "].x_c", "outside [0, 1]");
    }
    for (std::size_t k = 0; k < i; ++k) {
      if (m.stations[k].kind == st.kind && std::abs(m.stations[k].x_c - st.x_c) < 1e-9) {
        throw ManifestError("stations[" + std::to_string(i) + "]",
                            "duplicate " + to_string(st.kind) + " station at x_c");
      }
    }
  }
  try {
    m.model.validate();
  } catch (const std::exception& e) {
    throw ManifestError("model", e.what());
  }
  try {
    m.instrumented_model.validate();
  } catch (const std::exception& e) {
    throw ManifestError("instrumented_model", e.what());
  }
  try {
    m.mems.validate();
  } catch (const std::exception& e) {
    throw ManifestError("mems", e.what());
  }
  try {
    m.scanner.validate();
  } catch (const std::exception& e) {
    throw ManifestError("scanner", e.what());
  }
  if (!integer_ratio(m.mems_master_rate, m.mems.sample_rate)) {
    throw ManifestError("mems_master_rate",
                        "must be a positive integer multiple of mems.sample_rate");
  }
  if (!integer_ratio(m.scanner_master_rate, m.scanner.sample_rate)) {
    throw ManifestError("scanner_master_rate",
                        "must be a positive integer multiple of scanner.sample_rate");
  }
  const double fc_min = 2.0 * m.model.fluctuation_cutoff_hz;
  if (m.mems_master_rate < fc_min || m.scanner_master_rate < fc_min) {
    throw ManifestError("mems_master_rate",
                        "master rates must be >= 2 * model.fluctuation_cutoff");
  }
  if (!(m.scanner_master_rate > 2.0 * m.scanner.tube_natural_freq_hz)) {
    throw ManifestError("scanner_master_rate", "must exceed 2 * scanner.tube_natural_freq");
  }
}

}  // namespace windtap
