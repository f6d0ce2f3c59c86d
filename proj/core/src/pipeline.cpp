#include "windtap/pipeline.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <stdexcept>

namespace windtap {

namespace {

double median(std::vector<double> v) {
  const std::size_t n = v.size();
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (n % 2 == 1) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

// FFTW planning is not thread-safe; execution is.
std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

TimeSeries outlier_filter(const TimeSeries& series, double k) {
  validate(series);
  if (!(k > 0.0)) throw std::invalid_argument("outlier_filter: k must be > 0");
  const std::size_t n = series.values.size();
  if (n < 8) throw std::invalid_argument("outlier_filter: series shorter than 8 samples");

  const auto& v = series.values;
  std::vector<double> diffs(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) diffs[i] = v[i + 1] - v[i];
  const double med = median(diffs);
  std::vector<double> dev(diffs.size());
  for (std::size_t i = 0; i < diffs.size(); ++i) dev[i] = std::abs(diffs[i] - med);
  const double mad = median(dev);
  const double thr = k * mad;

  // A sample is an outlier when it jumps away from both neighbors; endpoints
  // are judged on their single difference.
  std::vector<char> flagged(n, 0);
  flagged[0] = dev[0] > thr;
  flagged[n - 1] = dev[n - 2] > thr;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    flagged[i] = dev[i - 1] > thr && dev[i] > thr;
  }

  TimeSeries out = series;
  std::size_t i = 0;
  while (i < n) {
    if (!flagged[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && flagged[j + 1]) ++j;
    const bool has_left = i > 0;
    const bool has_right = j + 1 < n;
    if (has_left && has_right) {
      const double lo = v[i - 1];
      const double hi = v[j + 1];
      const double span = static_cast<double>(j + 2 - i);
      for (std::size_t m = i; m <= j; ++m) {
        out.values[m] = lo + (hi - lo) * static_cast<double>(m - i + 1) / span;
      }
    } else if (has_right) {
      for (std::size_t m = i; m <= j; ++m) out.values[m] = v[j + 1];
    } else if (has_left) {
      for (std::size_t m = i; m <= j; ++m) out.values[m] = v[i - 1];
    }
    i = j + 1;
  }
  return out;
}

double estimate_atm(const TimeSeries& stationary) {
  validate(stationary);
  if (stationary.duration() < 10.0 - 1e-9) {
    throw std::invalid_argument("estimate_atm: stationary segment shorter than 10 s");
  }
  double acc = 0.0;
  for (double v : stationary.values) acc += v;
  return acc / static_cast<double>(stationary.values.size());
}

TimeSeries delta_mems(const TimeSeries& series, double p_atm) {
  if (!std::isfinite(p_atm)) throw std::invalid_argument("delta_mems: non-finite p_atm");
  TimeSeries out = series;
  for (auto& v : out.values) v -= p_atm;
  return out;
}

TimeSeries to_scanner_frame(const TimeSeries& series, double q_inf,
                            const CalibrationParams& cal) {
  if (!(q_inf >= 0.0)) throw std::invalid_argument("to_scanner_frame: q_inf must be >= 0");
  TimeSeries out = series;
  const double shift = q_inf * cal.alpha;
  for (auto& v : out.values) v += shift;
  return out;
}

CalibrationParams calibrate_alpha(const std::vector<StationAggregate>& mems_agg,
                                  const std::vector<StationAggregate>& scanner_agg,
                                  double reference_aoa, double q_inf) {
  if (!(q_inf > 0.0)) throw std::invalid_argument("calibrate_alpha: q_inf must be > 0");
  constexpr double kTol = 1e-9;
  double acc = 0.0;
  std::size_t count = 0;
  for (const auto& m : mems_agg) {
    if (std::abs(m.aoa - reference_aoa) > kTol) continue;
    for (const auto& s : scanner_agg) {
      if (std::abs(s.aoa - reference_aoa) > kTol) continue;
      if (std::abs(s.station.x_c - m.station.x_c) > kTol) continue;
      acc += (s.mean - m.mean) / q_inf;
      ++count;
    }
  }
  if (count == 0) {
    throw std::invalid_argument(
        "calibrate_alpha: no co-located station pair at the reference AoA");
  }
  CalibrationParams cal;
  cal.alpha = acc / static_cast<double>(count);
  cal.reference_aoa = reference_aoa;
  return cal;
}

TimeSeries compensate_tube(const TimeSeries& series, const ScannerSpec& spec,
                           double gain_limit) {
  spec.validate();
  validate(series);
  if (!(gain_limit >= 1.0)) throw std::invalid_argument("gain_limit must be >= 1");
  const std::size_t n = series.values.size();
  if (n < 2) return series;

  std::vector<double> buf(series.values);
  const std::size_t bins = n / 2 + 1;
  std::vector<std::complex<double>> spec_buf(bins);

  fftw_plan fwd, bwd;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), buf.data(),
                               reinterpret_cast<fftw_complex*>(spec_buf.data()),
                               FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_1d(static_cast<int>(n),
                               reinterpret_cast<fftw_complex*>(spec_buf.data()),
                               buf.data(), FFTW_ESTIMATE);
  }
  fftw_execute(fwd);

  for (std::size_t k = 0; k < bins; ++k) {
    const double f = static_cast<double>(k) * series.sample_rate / static_cast<double>(n);
    const TubeResponse h = tube_response(spec, f);
    std::complex<double> inv = 1.0 / std::complex<double>(h.re, h.im);
    const double g = std::abs(inv);
    if (g > gain_limit) inv *= gain_limit / g;
    spec_buf[k] *= inv;
  }

  fftw_execute(bwd);
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }

  TimeSeries out = series;
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) out.values[k] = buf[k] * scale;
  return out;
}

AlignedFrame synchronize_resample(const std::vector<SyncStream>& streams,
                                  const std::vector<double>& reference_pulses,
                                  double target_rate) {
  if (streams.empty()) throw std::invalid_argument("synchronize_resample: no streams");
  if (!(target_rate > 0.0)) throw std::invalid_argument("target_rate must be > 0");
  if (reference_pulses.size() < 2) {
    throw std::invalid_argument("synchronize_resample: need >= 2 reference pulses");
  }

  std::vector<double> offsets(streams.size(), 0.0);
  double t0 = -1e300, t1 = 1e300;
  for (std::size_t i = 0; i < streams.size(); ++i) {
    const auto& st = streams[i];
    validate(st.series);
    if (target_rate > st.series.sample_rate + 1e-9) {
      throw std::invalid_argument("target_rate exceeds a stream's sample rate");
    }
    if (st.pulses.size() < 2) {
      throw std::invalid_argument("stream '" + st.series.channel +
                                  "' spans fewer than 2 sync pulses");
    }
    const std::size_t m = std::min(st.pulses.size(), reference_pulses.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) acc += st.pulses[j] - reference_pulses[j];
    offsets[i] = acc / static_cast<double>(m);
    t0 = std::max(t0, st.series.start_time - offsets[i]);
    t1 = std::min(t1, st.series.end_time() - offsets[i]);
  }
  if (!(t1 >= t0)) {
    throw std::runtime_error("synchronize_resample: streams do not overlap in time");
  }

  const auto n_out = static_cast<std::size_t>(std::floor((t1 - t0) * target_rate + 1e-9)) + 1;
  AlignedFrame frame;
  frame.start_time = t0;
  frame.sample_rate = target_rate;
  frame.streams.reserve(streams.size());
  for (std::size_t i = 0; i < streams.size(); ++i) {
    const auto& src = streams[i].series;
    TimeSeries dst;
    dst.channel = src.channel;
    dst.start_time = t0;
    dst.sample_rate = target_rate;
    dst.values.resize(n_out);
    const std::size_t last = src.values.size() - 1;
    for (std::size_t k = 0; k < n_out; ++k) {
      const double t = t0 + static_cast<double>(k) / target_rate;
      double u = (t + offsets[i] - src.start_time) * src.sample_rate;
      u = std::clamp(u, 0.0, static_cast<double>(last));
      const auto lo = static_cast<std::size_t>(u);
      const std::size_t hi = std::min(lo + 1, last);
      const double frac = u - static_cast<double>(lo);
      dst.values[k] = src.values[lo] + frac * (src.values[hi] - src.values[lo]);
    }
    frame.streams.push_back(std::move(dst));
  }
  return frame;
}

RunStats aggregate_run(const TimeSeries& series) {
  const std::size_t n = series.values.size();
  if (n < 2) throw std::invalid_argument("aggregate_run: need at least 2 samples");
  double mean = 0.0;
  for (double v : series.values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : series.values) ss += (v - mean) * (v - mean);
  return RunStats{mean, std::sqrt(ss / static_cast<double>(n - 1))};
}

}  // namespace windtap
