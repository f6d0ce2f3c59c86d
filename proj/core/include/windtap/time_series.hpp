#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace windtap {

/// Uniformly sampled pressure record. `start_time` is expressed in the
/// recording stream's own clock; synchronization removes clock offsets.
struct TimeSeries {
  std::string channel;
  double start_time = 0.0;   // s
  double sample_rate = 0.0;  // Hz
  std::vector<double> values;  // Pa

  std::size_t size() const { return values.size(); }
  double duration() const { return static_cast<double>(values.size()) / sample_rate; }
  double time_at(std::size_t k) const { return start_time + static_cast<double>(k) / sample_rate; }
  double end_time() const {
    return values.empty() ? start_time : time_at(values.size() - 1);
  }
};

/// Throws std::invalid_argument on non-positive rate or non-finite samples.
void validate(const TimeSeries& ts);

}  // namespace windtap
