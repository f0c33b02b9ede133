#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "twinbeam/config.hpp"

namespace twinbeam {

struct GddSweepRow {
  double gdd_fs2 = 0.0;
  double tau_pump_fs = 0.0;
  double k_lg = 0.0;
  double k_hg = 0.0;
  double s_mod = 0.0;
  double s_occ = 0.0;
  double s_total = 0.0;
  std::string error;  // empty on success; numeric fields are NaN on failure
};

// Rebuilds the JSA per GDD point on a fixed grid (|J| is GDD-independent, so
// the grid is sized once), decomposes, populates at the configured gain and
// reports mode counts and entropy sectors. Points run on `workers` threads;
// rows come back in sweep order regardless of schedule, and per-point
// failures are recorded in-row while the sweep continues.
std::vector<GddSweepRow> run_gdd_sweep(const RunConfig& config, int workers = 1);

struct PowerSweepRow {
  double n_pump = 0.0;
  double gain = 0.0;
  double n_signal = 0.0;
};

// N_S = sinh^2(a sqrt(N_P)) over the sweep range.
std::vector<PowerSweepRow> run_power_sweep(const RunConfig& config);

// Least-squares scalar offset aligning a model S_mod(GDD) curve with data
// points (linear interpolation on the model grid; 1-D minimization to 1e-8).
// The offset is clamped so the shifted model stays within [0, 1].
double fit_min_entropy_offset(std::span<const double> model_gdd,
                              std::span<const double> model_smod,
                              std::span<const double> data_gdd,
                              std::span<const double> data_smod);

// CSV writers with the commented provenance header block
// (# key: value lines carrying version, config hash and seed).
void write_gdd_sweep_csv(const std::vector<GddSweepRow>& rows,
                         const RunConfig& config, std::ostream& os);
void write_power_sweep_csv(const std::vector<PowerSweepRow>& rows,
                           const RunConfig& config, std::ostream& os);

}  // namespace twinbeam
