#pragma once

#include <cmath>
#include <cstdint>

#include "twinbeam/constants.hpp"

namespace twinbeam {

// splitmix64 finalizer; full-avalanche 64-bit mix.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Stream key for substream `index` of master `seed`. Samplers give every
// shot its own substream, so ensembles are identical for any evaluation
// order or thread count.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

// Small counter-based generator (splitmix64 core). All distributions are
// hand-rolled inverse CDFs so ensembles are bit-identical across platforms;
// std::*_distribution is implementation-defined.
class SubstreamRng {
 public:
  SubstreamRng(std::uint64_t seed, std::uint64_t stream)
      : state_(derive_stream(seed, stream)) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Exponential with the given mean (inverse CDF; 1-u avoids log(0)).
  double exponential(double mean) { return -mean * std::log1p(-uniform()); }

  // Standard normal, Box-Muller; one value per call, pair cached.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * kPi * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

  // Bose-Einstein (geometric) photon number with the given mean.
  std::uint64_t geometric_photons(double mean) {
    if (mean <= 0.0) return 0;
    const double q = mean / (mean + 1.0);
    const double x = std::log1p(-uniform()) / std::log(q);
    return static_cast<std::uint64_t>(x);
  }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace twinbeam
