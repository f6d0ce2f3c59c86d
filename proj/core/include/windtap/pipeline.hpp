#pragma once

#include <cstddef>
#include <vector>

#include "windtap/flow_model.hpp"
#include "windtap/sensor_emulation.hpp"
#include "windtap/time_series.hpp"

namespace windtap {

struct CalibrationParams {
  double alpha = 1.0;
  double reference_aoa = 24.0;  // deg
};

/// Per-(station, AoA) first and second moments of a processed run.
struct StationAggregate {
  ChordStation station;
  double aoa = 0.0;   // deg
  double mean = 0.0;  // Pa
  double std = 0.0;   // Pa
  std::size_t n_samples = 0;
};

/// Differential outlier filter: samples whose first difference deviates from
/// the median difference by more than k * MAD(first differences) are replaced
/// by linear interpolation between the nearest surviving neighbors.
/// Idempotent on its own output; a constant series passes unchanged.
TimeSeries outlier_filter(const TimeSeries& series, double k = 6.0);

/// Atmospheric pressure estimate: mean of a wind-off segment, >= 10 s.
double estimate_atm(const TimeSeries& stationary);

/// Delta P_MEMS = P_i - P_atm, value-wise.
TimeSeries delta_mems(const TimeSeries& series, double p_atm);

/// Comparability transform into the scanner frame: value + q_inf * alpha.
TimeSeries to_scanner_frame(const TimeSeries& series, double q_inf,
                            const CalibrationParams& cal);

/// Alpha estimated at the reference AoA over co-located station pairs:
/// mean of (scanner_mean - mems_delta_mean) / q_inf.
CalibrationParams calibrate_alpha(const std::vector<StationAggregate>& mems_agg,
                                  const std::vector<StationAggregate>& scanner_agg,
                                  double reference_aoa, double q_inf);

/// Regularized frequency-domain inverse of the tube system; |1/H| is clamped
/// to gain_limit above resonance to bound noise amplification.
TimeSeries compensate_tube(const TimeSeries& series, const ScannerSpec& spec,
                           double gain_limit = 20.0);

/// A stream together with the sync pulse times it recorded in its own clock.
struct SyncStream {
  TimeSeries series;
  std::vector<double> pulses;
};

struct AlignedFrame {
  double start_time = 0.0;
  double sample_rate = 0.0;
  std::vector<TimeSeries> streams;  // shared grid, one per input stream
};

/// Removes per-stream clock offsets (estimated against the reference pulse
/// train) and linearly interpolates every stream onto a shared grid at
/// target_rate covering the common span.
AlignedFrame synchronize_resample(const std::vector<SyncStream>& streams,
                                  const std::vector<double>& reference_pulses,
                                  double target_rate);

struct RunStats {
  double mean = 0.0;
  double std = 0.0;  // unbiased, divide by N-1
};

RunStats aggregate_run(const TimeSeries& series);

}  // namespace windtap
