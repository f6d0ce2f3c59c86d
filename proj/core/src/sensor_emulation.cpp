#include "windtap/sensor_emulation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "windtap/rng.hpp"

namespace windtap {

namespace {

/// Integer downsampling ratio, rejecting non-integer rate quotients.
std::size_t rate_ratio(double truth_rate, double device_rate) {
  if (!(device_rate > 0.0) || !(truth_rate > 0.0)) {
    throw std::invalid_argument("sample rates must be positive");
  }
  const double q = truth_rate / device_rate;
  const auto r = static_cast<long long>(std::llround(q));
  if (r < 1 || std::abs(q - static_cast<double>(r)) > 1e-9 * q) {
    throw std::invalid_argument(
        "truth rate must be an integer multiple of the device rate");
  }
  return static_cast<std::size_t>(r);
}

struct Biquad {
  double b0, b1, b2, a1, a2;  // normalized, a0 = 1
};

/// Prewarped bilinear discretization of the unity-DC second-order tube model.
/// The prewarping pins the response at f_n exactly, so the resonance gain is
/// 1/(2*zeta) by construction.
Biquad design_tube_biquad(const ScannerSpec& spec, double sample_rate) {
  const double w0 = 2.0 * std::numbers::pi * spec.tube_natural_freq_hz;
  const double half = w0 / (2.0 * sample_rate);
  const double K = w0 / std::tan(half);
  const double z = spec.tube_damping;
  const double a0 = K * K + 2.0 * z * w0 * K + w0 * w0;
  Biquad q;
  q.b0 = w0 * w0 / a0;
  q.b1 = 2.0 * w0 * w0 / a0;
  q.b2 = w0 * w0 / a0;
  q.a1 = 2.0 * (w0 * w0 - K * K) / a0;
  q.a2 = (K * K - 2.0 * z * w0 * K + w0 * w0) / a0;
  return q;
}

}  // namespace

void MemsSpec::validate() const {
  if (!(sample_rate > 0.0)) throw std::invalid_argument("mems sample_rate must be > 0");
  if (noise_rms < 0.0) throw std::invalid_argument("mems noise_rms must be >= 0");
  if (offset_bound < 0.0) throw std::invalid_argument("mems offset_bound must be >= 0");
}

void ScannerSpec::validate() const {
  if (!(sample_rate > 0.0)) throw std::invalid_argument("scanner sample_rate must be > 0");
  if (noise_rms < 0.0) throw std::invalid_argument("scanner noise_rms must be >= 0");
  if (!(tube_damping > 0.0 && tube_damping < 1.0)) {
    throw std::invalid_argument("tube_damping must lie in (0, 1)");
  }
  if (!(tube_natural_freq_hz > 0.0) ||
      !(tube_natural_freq_hz < characterization_rate_hz / 2.0)) {
    throw std::invalid_argument(
        "tube_natural_freq must be below half the characterization rate");
  }
}

std::vector<double> block_mean_downsample(const std::vector<double>& values,
                                          std::size_t ratio) {
  if (ratio == 0) throw std::invalid_argument("downsample ratio must be >= 1");
  const std::size_t n_out = values.size() / ratio;
  std::vector<double> out(n_out);
  for (std::size_t k = 0; k < n_out; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < ratio; ++j) acc += values[k * ratio + j];
    out[k] = acc / static_cast<double>(ratio);
  }
  return out;
}

double mems_channel_offset(const MemsSpec& spec, std::uint64_t seed) {
  NoiseGen gen(mix_seed(seed, kSaltOffset));
  return gen.uniform(-spec.offset_bound, spec.offset_bound);
}

TimeSeries mems_acquire(const TimeSeries& truth, const MemsSpec& spec,
                        const FlowConditions& fc, std::uint64_t seed,
                        std::uint64_t noise_salt) {
  spec.validate();
  validate(truth);
  const std::size_t ratio = rate_ratio(truth.sample_rate, spec.sample_rate);

  TimeSeries out;
  out.channel = truth.channel;
  out.start_time = truth.start_time;
  out.sample_rate = spec.sample_rate;
  out.values = block_mean_downsample(truth.values, ratio);

  const double offset = mems_channel_offset(spec, seed);
  const double base = fc.atmospheric_pressure -
                      fc.stagnation_factor * fc.dynamic_pressure + offset;
  NoiseGen noise(mix_seed(seed, kSaltNoise ^ noise_salt));
  for (auto& v : out.values) v = base + v + spec.noise_rms * noise.gauss();
  return out;
}

TubeResponse tube_response(const ScannerSpec& spec, double freq_hz) {
  const double r = freq_hz / spec.tube_natural_freq_hz;
  // H(f) = 1 / (1 - r^2 + i 2 zeta r)
  const double dre = 1.0 - r * r;
  const double dim = 2.0 * spec.tube_damping * r;
  const double den = dre * dre + dim * dim;
  return TubeResponse{dre / den, -dim / den};
}

std::vector<double> apply_tube_filter(const std::vector<double>& values,
                                      double sample_rate, const ScannerSpec& spec) {
  spec.validate();
  if (!(sample_rate > 2.0 * spec.tube_natural_freq_hz)) {
    throw std::invalid_argument("tube filter needs rate > 2 * f_n");
  }
  const Biquad q = design_tube_biquad(spec, sample_rate);
  std::vector<double> out(values.size());
  // Direct form II transposed, started at the steady state of the first
  // sample: the tube is already pressurized when a recording begins, so a
  // constant input passes through without a spurious start-up transient.
  const double x0 = values.empty() ? 0.0 : values.front();
  double s1 = (1.0 - q.b0) * x0;
  double s2 = (q.b2 - q.a2) * x0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double x = values[k];
    const double y = q.b0 * x + s1;
    s1 = q.b1 * x - q.a1 * y + s2;
    s2 = q.b2 * x - q.a2 * y;
    out[k] = y;
  }
  return out;
}

TimeSeries scanner_acquire(const TimeSeries& truth, const ScannerSpec& spec,
                           std::uint64_t seed) {
  spec.validate();
  validate(truth);
  const std::size_t ratio = rate_ratio(truth.sample_rate, spec.sample_rate);

  TimeSeries out;
  out.channel = truth.channel;
  out.start_time = truth.start_time;
  out.sample_rate = spec.sample_rate;
  out.values = block_mean_downsample(
      apply_tube_filter(truth.values, truth.sample_rate, spec), ratio);

  NoiseGen noise(mix_seed(seed, kSaltNoise));
  for (auto& v : out.values) v += spec.noise_rms * noise.gauss();
  return out;
}

std::vector<double> sync_pulses(double duration_s) {
  if (!(duration_s > 0.0)) throw std::invalid_argument("duration must be > 0");
  const auto count = static_cast<std::size_t>(std::floor(duration_s)) + 1;
  std::vector<double> pulses(count);
  for (std::size_t k = 0; k < count; ++k) pulses[k] = static_cast<double>(k);
  return pulses;
}

double sensing_power_mw(const MemsSpec& spec, int n_sensors) {
  if (n_sensors < 0) throw std::invalid_argument("n_sensors must be >= 0");
  return static_cast<double>(n_sensors) * spec.power_per_sensor_mw;
}

}  // namespace windtap
