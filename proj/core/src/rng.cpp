#include "windtap/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace windtap {

std::uint64_t stable_hash(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed ^ salt;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double NoiseGen::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(eng_);
}

std::vector<double> NoiseGen::white(std::size_t n, double rms) {
  std::vector<double> out(n);
  for (auto& v : out) v = rms * gauss();
  return out;
}

std::vector<double> NoiseGen::ar1_unit(std::size_t n, double cutoff_hz, double rate_hz) {
  if (!(cutoff_hz > 0.0) || !(rate_hz > 0.0)) {
    throw std::invalid_argument("ar1_unit: cutoff and rate must be positive");
  }
  const double a = std::exp(-2.0 * std::numbers::pi * cutoff_hz / rate_hz);
  const double drive = std::sqrt(1.0 - a * a);
  std::vector<double> out(n);
  if (n == 0) return out;
  double x = gauss();  // stationary start: unit variance from sample 0
  out[0] = x;
  for (std::size_t k = 1; k < n; ++k) {
    x = a * x + drive * gauss();
    out[k] = x;
  }
  return out;
}

}  // namespace windtap
