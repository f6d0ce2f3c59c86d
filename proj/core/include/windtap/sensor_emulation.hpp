#pragma once

#include <cstdint>
#include <vector>

#include "windtap/flow_model.hpp"
#include "windtap/time_series.hpp"

namespace windtap {

/// Surface-mounted absolute barometer chain (LPS28DFW-class).
struct MemsSpec {
  double sample_rate = 100.0;      // Hz
  double noise_rms = 1.5;          // Pa, relative accuracy as white noise
  double offset_bound = 50.0;      // Pa, absolute accuracy as a static offset
  double power_per_sensor_mw = 0.16;
  double height_mm = 1.95;

  void validate() const;
};

/// Embedded differential pressure scanner chain with tubing dynamics.
struct ScannerSpec {
  double sample_rate = 512.0;           // Hz
  double noise_rms = 1.0;               // Pa
  double accuracy_bound = 7.5;          // Pa, static accuracy (informational)
  double tube_natural_freq_hz = 250.0;  // f_n of the tube-cavity resonance
  double tube_damping = 0.25;           // zeta, underdamped
  double characterization_rate_hz = 1024.0;

  void validate() const;
};

/// Anti-aliasing block-mean downsample. `ratio` must divide values.size()
/// remainder samples at the tail are dropped.
std::vector<double> block_mean_downsample(const std::vector<double>& values,
                                          std::size_t ratio);

/// Static per-channel offset a MEMS device would show, drawn from the seed.
/// Stable for a given (spec, seed) pair so stationary and flow acquisitions
/// of the same channel share it.
double mems_channel_offset(const MemsSpec& spec, std::uint64_t seed);

/// Absolute-pressure acquisition: P_atm + truth - beta*q_inf + offset + noise,
/// block-mean downsampled to the device rate. `noise_salt` distinguishes
/// noise streams of separate recordings of the same channel; the offset
/// depends on the seed only.
TimeSeries mems_acquire(const TimeSeries& truth, const MemsSpec& spec,
                        const FlowConditions& fc, std::uint64_t seed,
                        std::uint64_t noise_salt = 0);

/// Frequency response of the tube-cavity model at frequency f (unity DC gain
/// second-order resonance).
struct TubeResponse {
  double re = 1.0;
  double im = 0.0;
};
TubeResponse tube_response(const ScannerSpec& spec, double freq_hz);

/// Applies the discrete (prewarped bilinear) tube filter at the input rate.
std::vector<double> apply_tube_filter(const std::vector<double>& values,
                                      double sample_rate, const ScannerSpec& spec);

/// Differential acquisition: tube dynamics, block-mean downsample to the
/// scanner rate, white noise.
TimeSeries scanner_acquire(const TimeSeries& truth, const ScannerSpec& spec,
                           std::uint64_t seed);

/// Dedicated 1 Hz synchronization signal: pulses at 0, 1, 2, ... covering
/// the acquisition, floor(duration) + 1 of them.
std::vector<double> sync_pulses(double duration_s);

/// Total sensing power of an array, mW.
double sensing_power_mw(const MemsSpec& spec, int n_sensors);

}  // namespace windtap
