#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "windtap/pipeline.hpp"

namespace windtap {

enum class BladeState { clean, instrumented };

std::string to_string(BladeState state);
BladeState blade_state_from_string(const std::string& s);

/// All (station, AoA) aggregates of one measurement system over a sweep.
struct SweepSummary {
  BladeState blade_state = BladeState::clean;
  SensorKind system = SensorKind::mems;
  std::vector<StationAggregate> entries;

  /// Distinct station positions, ascending.
  std::vector<double> stations() const;
  /// Distinct AoA values, ascending.
  std::vector<double> aoa_grid() const;
  /// Entries of one station ordered by AoA.
  std::vector<StationAggregate> curve(double x_c) const;
  /// Entries at one AoA ordered by station position.
  std::vector<StationAggregate> profile(double aoa) const;
};

struct SeparationMethod {
  double k_threshold = 3.0;
  double attached_max_aoa = 8.0;  // deg
};

/// Smallest AoA whose fluctuation level exceeds
/// median(attached stds) + k * IQR(attached stds); nullopt when the sweep
/// never separates. Needs >= 4 attached-window points.
std::optional<double> detect_separation_aoa(const std::vector<StationAggregate>& curve,
                                            double k = 3.0,
                                            double attached_max_aoa = 8.0);

/// Intermittent separation point: x/c of the maximum-std station, ties broken
/// toward the trailing edge.
double separation_point_estimate(const std::vector<StationAggregate>& profile);

struct LinearFit {
  ChordStation station;
  double slope = 0.0;      // Pa/deg
  double intercept = 0.0;  // Pa
  double residual_rms = 0.0;
};

/// Per-station least-squares affine fit of mean vs AoA inside the window.
std::vector<LinearFit> fit_linear_models(const SweepSummary& sweep,
                                         double window_min, double window_max);

struct AoaEstimate {
  double aoa = 0.0;
  double residual_rms = 0.0;  // Pa
};

/// Weighted least squares over stations, weights 1/residual^2 (uniform when
/// the fits are exact). `snapshot` holds (x_c, mean pressure) pairs.
AoaEstimate infer_aoa(const std::vector<std::pair<double, double>>& snapshot,
                      const std::vector<LinearFit>& models);

struct StationError {
  double x_c = 0.0;
  double mean_error_pct = 0.0;
  double std_error_pct = 0.0;
};

struct ComparisonReport {
  std::vector<StationError> per_station;
  std::string normalization = "scanner-range";
};

/// Table-II style errors: per paired station, 100 * average over AoA of
/// |mems - scanner| normalized by the scanner's range over the sweep.
/// `station_pairing` maps mems x_c -> scanner x_c.
ComparisonReport compare_systems(const SweepSummary& mems,
                                 const SweepSummary& scanner,
                                 const std::vector<std::pair<double, double>>& station_pairing);

struct StationShift {
  double x_c = 0.0;
  std::optional<double> onset_shift_deg;  // clean minus instrumented
  double peak_std_ratio = 1.0;
};

struct ImpactReport {
  std::vector<StationShift> per_station;
};

/// Clean-vs-instrumented separation shift per shared station.
ImpactReport impact_shift(const SweepSummary& clean,
                          const SweepSummary& instrumented,
                          const SeparationMethod& method = {});

/// Pairs each mems station with its nearest tap within max_distance chord.
std::vector<std::pair<double, double>> nearest_tap_pairing(
    const std::vector<double>& mems_stations,
    const std::vector<double>& tap_stations, double max_distance = 0.05);

}  // namespace windtap
