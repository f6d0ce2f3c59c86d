#include "windtap/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "windtap/rng.hpp"

namespace windtap {

using nlohmann::json;

namespace {

std::string format_aoa(double aoa) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%+g", aoa);
  return buf;
}

TimeSeries still_air_truth(const ChordStation& station, double duration_s,
                           double master_rate_hz) {
  TimeSeries ts;
  ts.channel = station.label;
  ts.sample_rate = master_rate_hz;
  ts.values.assign(static_cast<std::size_t>(std::llround(duration_s * master_rate_hz)), 0.0);
  return ts;
}

std::vector<double> shifted_pulses(double duration_s, double clock_offset) {
  auto pulses = sync_pulses(duration_s);
  for (auto& p : pulses) p += clock_offset;
  return pulses;
}

StationAggregate to_station_aggregate(const AggregateRow& row) {
  StationAggregate agg;
  agg.station = ChordStation{row.station_xc, row.kind, station_label(row.station_xc, row.kind)};
  agg.aoa = row.aoa_deg;
  agg.mean = row.mean_pa;
  agg.std = row.std_pa;
  agg.n_samples = row.n;
  return agg;
}

}  // namespace

std::string make_run_id(const std::string& campaign_id, BladeState state, double aoa) {
  return campaign_id + "__" + to_string(state) + "__aoa" + format_aoa(aoa);
}

std::optional<BladeState> blade_state_from_run_id(const std::string& run_id) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const auto next = run_id.find("__", pos);
    if (next == std::string::npos) {
      parts.push_back(run_id.substr(pos));
      break;
    }
    parts.push_back(run_id.substr(pos, next - pos));
    pos = next + 2;
  }
  for (const auto& p : parts) {
    if (p == "clean") return BladeState::clean;
    if (p == "instrumented") return BladeState::instrumented;
  }
  return std::nullopt;
}

std::vector<SimulatedRun> simulate_campaign(const CampaignManifest& manifest) {
  validate(manifest);
  const FlowConditions fc = manifest.conditions();
  const FlowConditions still = FlowConditions::make(0.0, manifest.air_density,
                                                    manifest.atmospheric_pressure,
                                                    manifest.stagnation_factor);
  std::vector<SimulatedRun> runs;
  for (BladeState state : manifest.blade_states) {
    const FlowModelParams& params = state == BladeState::instrumented
                                        ? manifest.instrumented_model
                                        : manifest.model;
    for (double aoa : manifest.aoa_list) {
      SimulatedRun run;
      run.run_id = make_run_id(manifest.campaign_id, state, aoa);
      run.blade_state = state;
      run.aoa = aoa;
      run.conditions = fc;
      run.scanner_spec = manifest.scanner;
      const std::uint64_t run_seed = mix_seed(manifest.seed, stable_hash(run.run_id));

      for (const auto& station : manifest.stations) {
        const std::uint64_t ch_seed = mix_seed(run_seed, stable_hash(station.label));
        SimulatedChannel ch;
        ch.station = station;
        if (station.kind == SensorKind::mems) {
          const auto truth =
              ground_truth_series(station, aoa, fc, params, manifest.duration,
                                  manifest.mems_master_rate, mix_seed(ch_seed, kSaltTruth));
          ch.recorded = mems_acquire(truth, manifest.mems, fc, ch_seed, 1);
          const auto still_truth = still_air_truth(station, manifest.stationary_duration,
                                                   manifest.mems_master_rate);
          ch.stationary = mems_acquire(still_truth, manifest.mems, still, ch_seed, 2);
          ch.clock_offset = manifest.mems_clock_offset;
        } else {
          const auto truth =
              ground_truth_series(station, aoa, fc, params, manifest.duration,
                                  manifest.scanner_master_rate, mix_seed(ch_seed, kSaltTruth));
          ch.recorded = scanner_acquire(truth, manifest.scanner, ch_seed);
          ch.clock_offset = manifest.scanner_clock_offset;
        }
        // The stream clock runs ahead of true time by its offset.
        ch.recorded.start_time += ch.clock_offset;
        ch.stationary.start_time += ch.clock_offset;
        ch.pulses = shifted_pulses(manifest.duration, ch.clock_offset);
        run.channels.push_back(std::move(ch));
      }
      runs.push_back(std::move(run));
    }
  }
  return runs;
}

void write_campaign(const std::vector<SimulatedRun>& runs,
                    const CampaignManifest& manifest,
                    const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  json index;
  index["campaign_id"] = manifest.campaign_id;
  index["manifest"] = json::parse(manifest_to_json(manifest));
  json jruns = json::array();
  for (const auto& run : runs) {
    json jrun;
    jrun["run_id"] = run.run_id;
    jrun["blade_state"] = to_string(run.blade_state);
    jrun["aoa_deg"] = run.aoa;
    jrun["wind_speed_mps"] = run.conditions.wind_speed;
    jrun["air_density_kgm3"] = run.conditions.air_density;
    jrun["atmospheric_pressure_pa"] = run.conditions.atmospheric_pressure;
    json jchannels = json::array();
    for (const auto& ch : run.channels) {
      const std::string file = run.run_id + "__" + ch.station.label + ".csv";
      write_series_csv(out_dir / file, ch.recorded);
      json jch;
      jch["file"] = file;
      jch["x_c"] = ch.station.x_c;
      jch["kind"] = to_string(ch.station.kind);
      jch["label"] = ch.station.label;
      jch["clock_offset_s"] = ch.clock_offset;
      if (!ch.stationary.values.empty()) {
        const std::string sfile = run.run_id + "__" + ch.station.label + "__stationary.csv";
        write_series_csv(out_dir / sfile, ch.stationary);
        jch["stationary_file"] = sfile;
      }
      jchannels.push_back(std::move(jch));
    }
    jrun["channels"] = std::move(jchannels);
    jruns.push_back(std::move(jrun));
  }
  index["runs"] = std::move(jruns);
  std::ofstream out(out_dir / "run_index.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write run index in " + out_dir.string());
  out << index.dump(2) << '\n';
}

LoadReport load_campaign(const std::filesystem::path& run_index) {
  std::ifstream in(run_index);
  if (!in) throw std::runtime_error("cannot open run index: " + run_index.string());
  json index;
  try {
    index = json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error(run_index.string() + ": " + e.what());
  }
  const auto dir = run_index.parent_path();

  ScannerSpec scanner;
  if (index.contains("manifest") && index["manifest"].contains("scanner")) {
    const auto& s = index["manifest"]["scanner"];
    scanner.sample_rate = s.value("sample_rate", scanner.sample_rate);
    scanner.noise_rms = s.value("noise_rms", scanner.noise_rms);
    scanner.accuracy_bound = s.value("accuracy_bound", scanner.accuracy_bound);
    scanner.tube_natural_freq_hz = s.value("tube_natural_freq", scanner.tube_natural_freq_hz);
    scanner.tube_damping = s.value("tube_damping", scanner.tube_damping);
    scanner.characterization_rate_hz =
        s.value("characterization_rate", scanner.characterization_rate_hz);
  }

  LoadReport report;
  for (const auto& jrun : index.value("runs", json::array())) {
    const std::string run_id = jrun.value("run_id", "<missing run_id>");
    try {
      SimulatedRun run;
      run.run_id = run_id;
      run.blade_state = blade_state_from_string(jrun.value("blade_state", "clean"));
      run.aoa = jrun.at("aoa_deg").get<double>();
      run.conditions = FlowConditions::make(jrun.at("wind_speed_mps").get<double>(),
                                            jrun.at("air_density_kgm3").get<double>(),
                                            jrun.value("atmospheric_pressure_pa", 101325.0));
      run.scanner_spec = scanner;
      for (const auto& jch : jrun.at("channels")) {
        SimulatedChannel ch;
        ch.station.x_c = jch.at("x_c").get<double>();
        ch.station.kind = sensor_kind_from_string(jch.at("kind").get<std::string>());
        ch.station.label = jch.value("label", station_label(ch.station.x_c, ch.station.kind));
        ch.clock_offset = jch.value("clock_offset_s", 0.0);
        ch.recorded = read_series_csv(dir / jch.at("file").get<std::string>(),
                                      ch.station.label);
        if (jch.contains("stationary_file")) {
          ch.stationary = read_series_csv(dir / jch["stationary_file"].get<std::string>(),
                                          ch.station.label);
        }
        ch.pulses = shifted_pulses(ch.recorded.duration(), ch.clock_offset);
        run.channels.push_back(std::move(ch));
      }
      report.runs.push_back(std::move(run));
    } catch (const std::exception& e) {
      report.failed_runs.push_back(run_id + ": " + e.what());
    }
  }
  return report;
}

ProcessResult process_campaign(const std::vector<SimulatedRun>& runs,
                               const ProcessOptions& options) {
  struct RunRows {
    const SimulatedRun* run;
    std::vector<AggregateRow> rows;
  };
  std::vector<RunRows> per_run;
  ProcessResult result;

  for (const auto& run : runs) {
    try {
      std::vector<SyncStream> streams;
      std::vector<ChordStation> stations;
      double min_rate = 1e300;
      double min_duration = 1e300;
      for (const auto& ch : run.channels) {
        SyncStream stream;
        stream.pulses = ch.pulses;
        if (ch.station.kind == SensorKind::mems) {
          if (ch.stationary.values.empty()) {
            throw std::runtime_error("channel '" + ch.station.label +
                                     "': missing stationary segment");
          }
          const double p_atm = estimate_atm(outlier_filter(ch.stationary, options.outlier_k));
          stream.series = delta_mems(outlier_filter(ch.recorded, options.outlier_k), p_atm);
        } else {
          stream.series = compensate_tube(ch.recorded, run.scanner_spec,
                                          options.tube_gain_limit);
        }
        min_rate = std::min(min_rate, stream.series.sample_rate);
        min_duration = std::min(min_duration, stream.series.duration());
        stations.push_back(ch.station);
        streams.push_back(std::move(stream));
      }
      if (streams.empty()) throw std::runtime_error("run has no channels");
      const double target = options.target_rate > 0.0 ? options.target_rate : min_rate;
      const auto frame =
          synchronize_resample(streams, sync_pulses(min_duration), target);

      RunRows rows{&run, {}};
      for (std::size_t i = 0; i < frame.streams.size(); ++i) {
        const auto stats = aggregate_run(frame.streams[i]);
        AggregateRow row;
        row.run_id = run.run_id;
        row.station_xc = stations[i].x_c;
        row.kind = stations[i].kind;
        row.aoa_deg = run.aoa;
        row.mean_pa = stats.mean;
        row.std_pa = stats.std;
        row.n = frame.streams[i].size();
        rows.rows.push_back(std::move(row));
      }
      per_run.push_back(std::move(rows));
    } catch (const std::exception& e) {
      result.failed_runs.push_back(run.run_id + ": " + e.what());
    }
  }

  // Alpha calibration at the reference AoA, averaged over runs that carry it.
  if (options.alpha_override) {
    result.calibration = CalibrationParams{*options.alpha_override, options.reference_aoa};
  } else {
    double acc = 0.0;
    std::size_t count = 0;
    for (const auto& rr : per_run) {
      if (std::abs(rr.run->aoa - options.reference_aoa) > 1e-9) continue;
      std::vector<StationAggregate> mems_agg, scanner_agg;
      for (const auto& row : rr.rows) {
        (row.kind == SensorKind::mems ? mems_agg : scanner_agg)
            .push_back(to_station_aggregate(row));
      }
      if (mems_agg.empty() || scanner_agg.empty()) continue;
      const auto cal = calibrate_alpha(mems_agg, scanner_agg, options.reference_aoa,
                                       rr.run->conditions.dynamic_pressure);
      acc += cal.alpha;
      ++count;
    }
    if (count == 0) {
      throw std::invalid_argument(
          "alpha calibration: no run at the reference AoA with co-located "
          "mems/tap stations; pass an explicit alpha override");
    }
    result.calibration = CalibrationParams{acc / static_cast<double>(count),
                                           options.reference_aoa};
  }

  // Frame transform: shift MEMS means into the scanner frame.
  for (auto& rr : per_run) {
    const double shift = result.calibration.alpha * rr.run->conditions.dynamic_pressure;
    for (auto& row : rr.rows) {
      if (row.kind == SensorKind::mems) row.mean_pa += shift;
      result.aggregates.push_back(std::move(row));
    }
  }
  return result;
}

std::vector<SweepSummary> build_summaries(const std::vector<AggregateRow>& rows) {
  std::map<std::pair<std::string, std::string>, SweepSummary> groups;
  for (const auto& row : rows) {
    const BladeState state =
        blade_state_from_run_id(row.run_id).value_or(BladeState::clean);
    const auto key = std::make_pair(to_string(state), to_string(row.kind));
    auto& summary = groups[key];
    summary.blade_state = state;
    summary.system = row.kind;
    summary.entries.push_back(to_station_aggregate(row));
    summary.entries.back().aoa = row.aoa_deg;
  }
  std::vector<SweepSummary> out;
  out.reserve(groups.size());
  for (auto& [key, summary] : groups) out.push_back(std::move(summary));
  return out;
}

ComparisonReport compare_aggregates(const std::vector<AggregateRow>& mems_rows,
                                    const std::vector<AggregateRow>& scanner_rows,
                                    double pairing_distance) {
  // Station identity here is (x_c, kind); exact same-kind matches win over
  // cross-kind ones so that self-comparison pairs every station with itself.
  struct Key {
    double x_c;
    SensorKind kind;
  };
  auto collect = [](const std::vector<AggregateRow>& rows) {
    std::vector<Key> keys;
    for (const auto& r : rows) {
      const bool seen = std::any_of(keys.begin(), keys.end(), [&](const Key& k) {
        return std::abs(k.x_c - r.station_xc) < 1e-9 && k.kind == r.kind;
      });
      if (!seen) keys.push_back(Key{r.station_xc, r.kind});
    }
    return keys;
  };
  const auto keys_a = collect(mems_rows);
  const auto keys_b = collect(scanner_rows);

  auto curve = [](const std::vector<AggregateRow>& rows, const Key& key) {
    std::vector<AggregateRow> out;
    for (const auto& r : rows) {
      if (std::abs(r.station_xc - key.x_c) < 1e-9 && r.kind == key.kind) out.push_back(r);
    }
    return out;
  };

  ComparisonReport report;
  for (const auto& ka : keys_a) {
    double best = 1e300;
    const Key* best_key = nullptr;
    for (const auto& kb : keys_b) {
      const double d = std::abs(kb.x_c - ka.x_c) + (kb.kind == ka.kind ? 0.0 : 1e-7);
      if (d < best) {
        best = d;
        best_key = &kb;
      }
    }
    if (!best_key || best > pairing_distance + 1e-6) continue;
    const auto ca = curve(mems_rows, ka);
    const auto cb = curve(scanner_rows, *best_key);

    double lo_m = 1e300, hi_m = -1e300, lo_s = 1e300, hi_s = -1e300;
    double err_m = 0.0, err_s = 0.0;
    std::size_t count = 0;
    for (const auto& a : ca) {
      for (const auto& b : cb) {
        if (std::abs(a.aoa_deg - b.aoa_deg) > 1e-9) continue;
        lo_m = std::min(lo_m, b.mean_pa);
        hi_m = std::max(hi_m, b.mean_pa);
        lo_s = std::min(lo_s, b.std_pa);
        hi_s = std::max(hi_s, b.std_pa);
        err_m += std::abs(a.mean_pa - b.mean_pa);
        err_s += std::abs(a.std_pa - b.std_pa);
        ++count;
      }
    }
    if (count == 0) continue;
    const double range_m = hi_m - lo_m;
    const double range_s = hi_s - lo_s;
    if (!(range_m > 0.0) || !(range_s > 0.0)) {
      throw std::invalid_argument("compare: degenerate sweep (zero reference range)");
    }
    StationError err;
    err.x_c = ka.x_c;
    err.mean_error_pct = 100.0 * (err_m / static_cast<double>(count)) / range_m;
    err.std_error_pct = 100.0 * (err_s / static_cast<double>(count)) / range_s;
    report.per_station.push_back(err);
  }
  if (report.per_station.empty()) {
    throw std::invalid_argument("compare: no station pairs within the pairing distance");
  }
  return report;
}

AnalysisOutputs analyze_aggregates(const std::vector<AggregateRow>& rows,
                                   const std::filesystem::path& out_dir,
                                   const AnalysisOptions& options) {
  if (rows.empty()) throw std::invalid_argument("analyze: empty aggregates table");
  std::filesystem::create_directories(out_dir);
  AnalysisOutputs outputs;
  const auto summaries = build_summaries(rows);

  auto emit = [&outputs](const std::filesystem::path& p) { outputs.files.push_back(p); };

  {
    const auto path = out_dir / "suction_curves.csv";
    std::ofstream out(path, std::ios::binary);
    out << "blade_state,system,station_xc,aoa_deg,mean_pa,std_pa\n";
    for (const auto& s : summaries) {
      for (double x : s.stations()) {
        for (const auto& e : s.curve(x)) {
          out << to_string(s.blade_state) << ',' << to_string(s.system) << ','
              << format_double(e.station.x_c) << ',' << format_double(e.aoa) << ','
              << format_double(e.mean) << ',' << format_double(e.std) << '\n';
        }
      }
    }
    emit(path);
  }
  {
    const auto path = out_dir / "chordwise_profiles.csv";
    std::ofstream out(path, std::ios::binary);
    out << "blade_state,system,aoa_deg,station_xc,mean_pa,std_pa\n";
    for (const auto& s : summaries) {
      for (double aoa : s.aoa_grid()) {
        for (const auto& e : s.profile(aoa)) {
          out << to_string(s.blade_state) << ',' << to_string(s.system) << ','
              << format_double(e.aoa) << ',' << format_double(e.station.x_c) << ','
              << format_double(e.mean) << ',' << format_double(e.std) << '\n';
        }
      }
    }
    emit(path);
  }
  {
    const auto onset_path = out_dir / "separation_onset.csv";
    const auto front_path = out_dir / "separation_front.csv";
    std::ofstream onset_out(onset_path, std::ios::binary);
    std::ofstream front_out(front_path, std::ios::binary);
    onset_out << "blade_state,system,station_xc,onset_aoa_deg\n";
    front_out << "blade_state,system,aoa_deg,front_xc\n";
    for (const auto& s : summaries) {
      for (double x : s.stations()) {
        try {
          const auto onset = detect_separation_aoa(s.curve(x), options.separation.k_threshold,
                                                   options.separation.attached_max_aoa);
          onset_out << to_string(s.blade_state) << ',' << to_string(s.system) << ','
                    << format_double(x) << ','
                    << (onset ? format_double(*onset) : std::string()) << '\n';
        } catch (const std::exception& e) {
          outputs.notes.push_back("onset skipped for x/c=" + format_double(x) + ": " +
                                  e.what());
        }
      }
      for (double aoa : s.aoa_grid()) {
        const auto profile = s.profile(aoa);
        if (profile.size() < 3) continue;
        front_out << to_string(s.blade_state) << ',' << to_string(s.system) << ','
                  << format_double(aoa) << ','
                  << format_double(separation_point_estimate(profile)) << '\n';
      }
    }
    emit(onset_path);
    emit(front_path);
  }

  // Per-state MEMS vs scanner comparison.
  for (const auto& s : summaries) {
    if (s.system != SensorKind::mems) continue;
    const SweepSummary* scanner = nullptr;
    for (const auto& other : summaries) {
      if (other.blade_state == s.blade_state && other.system == SensorKind::tap) {
        scanner = &other;
      }
    }
    if (!scanner) {
      outputs.notes.push_back("comparison absent for state " + to_string(s.blade_state) +
                              ": no scanner aggregates");
      continue;
    }
    const auto pairing =
        nearest_tap_pairing(s.stations(), scanner->stations(), options.pairing_distance);
    if (pairing.empty()) {
      outputs.notes.push_back("comparison absent for state " + to_string(s.blade_state) +
                              ": no station pairs within distance");
      continue;
    }
    try {
      const auto report = compare_systems(s, *scanner, pairing);
      const auto path = out_dir / ("comparison_" + to_string(s.blade_state) + ".csv");
      write_comparison_csv(path, report);
      emit(path);
    } catch (const std::exception& e) {
      outputs.notes.push_back("comparison failed for state " + to_string(s.blade_state) +
                              ": " + e.what());
    }
  }

  // Clean vs instrumented impact, preferring the scanner view.
  {
    const SweepSummary* clean = nullptr;
    const SweepSummary* instrumented = nullptr;
    for (SensorKind kind : {SensorKind::tap, SensorKind::mems}) {
      for (const auto& s : summaries) {
        if (s.system != kind) continue;
        if (s.blade_state == BladeState::clean && !clean) clean = &s;
        if (s.blade_state == BladeState::instrumented && !instrumented) instrumented = &s;
      }
      if (clean && instrumented) break;
      clean = instrumented = nullptr;
    }
    if (clean && instrumented) {
      try {
        const auto report = impact_shift(*clean, *instrumented, options.separation);
        const auto path = out_dir / "impact.csv";
        write_impact_csv(path, report);
        emit(path);
      } catch (const std::exception& e) {
        outputs.notes.push_back(std::string("impact report failed: ") + e.what());
      }
    } else {
      outputs.notes.push_back("impact report absent: campaign has a single blade state");
    }
  }

  {
    const auto path = out_dir / "analysis.json";
    json j;
    j["method"] = {{"separation_k_threshold", options.separation.k_threshold},
                   {"separation_attached_max_aoa", options.separation.attached_max_aoa},
                   {"pairing_distance_chord", options.pairing_distance},
                   {"linear_window_deg", {options.linear_window_min, options.linear_window_max}},
                   {"error_normalization", "scanner-range"}};
    json files = json::array();
    for (const auto& f : outputs.files) files.push_back(f.filename().string());
    j["files"] = files;
    j["notes"] = outputs.notes;
    std::ofstream out(path, std::ios::binary);
    out << j.dump(2) << '\n';
    emit(path);
  }
  return outputs;
}

}  // namespace windtap
