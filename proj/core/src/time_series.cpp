#include "windtap/time_series.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace windtap {

void validate(const TimeSeries& ts) {
  if (!(ts.sample_rate > 0.0) || !std::isfinite(ts.sample_rate)) {
    throw std::invalid_argument("TimeSeries '" + ts.channel +
                                "': sample_rate must be positive and finite");
  }
  if (!std::isfinite(ts.start_time)) {
    throw std::invalid_argument("TimeSeries '" + ts.channel + "': non-finite start_time");
  }
  for (std::size_t k = 0; k < ts.values.size(); ++k) {
    if (!std::isfinite(ts.values[k])) {
      throw std::invalid_argument("TimeSeries '" + ts.channel + "': non-finite sample at index " +
                                  std::to_string(k));
    }
  }
}

}  // namespace windtap
