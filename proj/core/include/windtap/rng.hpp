#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace windtap {

/// FNV-1a hash of a channel label; stable across platforms, unlike std::hash.
std::uint64_t stable_hash(std::string_view s);

/// Derives an independent sub-seed (splitmix64 finalizer over seed ^ salt).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

// Salt tags used to keep per-channel random streams disjoint.
inline constexpr std::uint64_t kSaltTruth = 0x7472757468ULL;
inline constexpr std::uint64_t kSaltOffset = 0x6f66667365ULL;
inline constexpr std::uint64_t kSaltNoise = 0x6e6f697365ULL;

/// Seed-scoped random source. Never touches global state.
class NoiseGen {
 public:
  explicit NoiseGen(std::uint64_t seed) : eng_(seed) {}

  double gauss() { return normal_(eng_); }
  double uniform(double lo, double hi);

  /// White Gaussian noise with the given RMS.
  std::vector<double> white(std::size_t n, double rms);

  /// Unit-variance first-order autoregressive noise with the given cutoff.
  /// x[k] = a x[k-1] + sqrt(1-a^2) w[k], a = exp(-2*pi*cutoff/rate); the
  /// stationary long-run variance is exactly 1.
  std::vector<double> ar1_unit(std::size_t n, double cutoff_hz, double rate_hz);

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace windtap
