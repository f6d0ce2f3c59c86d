#pragma once

#include <cstdint>
#include <string>

#include "windtap/time_series.hpp"

namespace windtap {

/// Free-stream state. Derived quantities are always recomputed from the
/// primary ones, so q = 0.5*rho*U^2 and P_atm - P_inf = beta*q hold by
/// construction.
struct FlowConditions {
  double wind_speed = 0.0;            // U_inf, m/s
  double air_density = 1.225;         // rho, kg/m^3
  double atmospheric_pressure = 101325.0;  // P_atm, Pa
  double stagnation_factor = 1.0;     // beta; 1 is the ideal Bernoulli case
  double dynamic_pressure = 0.0;      // q_inf, Pa (derived)
  double free_stream_pressure = 0.0;  // P_inf = P_atm - beta*q_inf (derived)
  double reynolds = 0.0;              // derived
  double mach = 0.0;                  // derived

  static FlowConditions make(double wind_speed, double air_density,
                             double atmospheric_pressure,
                             double stagnation_factor = 1.0,
                             double chord_m = 1.25,
                             double kinematic_viscosity = 1.46e-5,
                             double speed_of_sound = 340.3);
};

/// Knobs of the synthetic surface-pressure model. Defaults reproduce the
/// reference landmarks: separation onset at the trailing edge at 10 deg,
/// full stall at 26 deg, a -500 Pa separated plateau.
struct FlowModelParams {
  double linear_aoa_min = -10.0;      // deg, attached regime window
  double linear_aoa_max = 8.0;        // deg
  double te_separation_aoa = 10.0;    // deg, front leaves the trailing edge
  double full_separation_aoa = 26.0;  // deg, front reaches the leading edge
  double plateau_pressure = -500.0;   // Pa
  double slope_s0 = 150.0;            // Pa/deg; attached slope m(x) = -(s0 - s1*x)
  double slope_s1 = 140.0;            // Pa/deg per chord fraction
  double offset_pressure = -100.0;    // Pa, attached intercept
  double blend_width = 0.03;          // chord fraction, logistic blend scale
  double base_std = 15.0;             // Pa, attached fluctuation level
  double peak_std = 120.0;            // Pa, bump amplitude at the front
  double peak_width = 0.08;           // chord fraction, bump width
  double stall_std = 60.0;            // Pa, extra level past full separation
  double fluctuation_cutoff_hz = 20.0;

  /// Throws std::invalid_argument when a constraint is violated.
  void validate() const;
};

enum class SensorKind { mems, tap };

std::string to_string(SensorKind kind);
SensorKind sensor_kind_from_string(const std::string& s);

/// A measurement location on the chord, 0 <= x_c <= 1.
struct ChordStation {
  double x_c = 0.0;
  SensorKind kind = SensorKind::mems;
  std::string label;
};

void validate(const ChordStation& station);

/// q = 0.5 * rho * U^2. Rejects non-finite inputs, rho <= 0 or U < 0.
double dynamic_pressure(double air_density, double wind_speed);

/// Chordwise position of the separation front: 1 below te_separation_aoa,
/// 0 at/above full_separation_aoa, linear in between. Non-increasing in aoa.
double separation_front(double aoa_deg, const FlowModelParams& params);

/// Mean differential surface pressure: logistic blend between the affine
/// attached branch m(x)*aoa + c0 and the separated plateau.
double mean_pressure(const ChordStation& station, double aoa_deg,
                     const FlowConditions& fc, const FlowModelParams& params);

/// Fluctuation level: base + Gaussian bump centered on the front while it
/// travels the chord, base + stall level past full separation.
double fluctuation_std(const ChordStation& station, double aoa_deg,
                       const FlowModelParams& params);

/// Sampled realization of mean + std * AR(1) noise. Bit-identical for a
/// given seed.
TimeSeries ground_truth_series(const ChordStation& station, double aoa_deg,
                               const FlowConditions& fc,
                               const FlowModelParams& params, double duration_s,
                               double master_rate_hz, std::uint64_t seed);

}  // namespace windtap
