#pragma once

#include <cstdint>
#include <string>

#include "twinbeam/dispersion.hpp"
#include "twinbeam/pump.hpp"

namespace twinbeam {

inline constexpr const char* kVersion = "0.1.0";

struct GridSpec {
  int n_points = 512;
  double span_lobes = 3.0;
};

struct SweepSpec {
  enum class Variable { Gdd, PumpPower };
  Variable variable = Variable::Gdd;
  double lo = -60000.0;
  double hi = 60000.0;
  int points = 41;

  void validate() const;  // finite ordered range, points >= 1
};

struct RunConfig {
  CrystalConfig crystal;
  PumpConfig pump;
  GridSpec grid;
  SweepSpec sweep;
  double gain = 10.0;
  double brightness_a = 3.8e-6;  // gain per sqrt(pump photon), power sweeps
  std::uint64_t seed = 1;

  void validate() const;
};

// INI-style `key = value` file with [crystal], [pump], [grid], [sweep],
// [run] sections. Unknown sections or keys are configuration errors.
RunConfig load_config(const std::string& path);
RunConfig parse_config(std::istream& is, const std::string& origin);

// FNV-1a hash of the canonical key=value serialization, hex string.
std::string config_hash(const RunConfig& config);

}  // namespace twinbeam
