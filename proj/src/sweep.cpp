#include "twinbeam/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <thread>

#include "twinbeam/entropy.hpp"
#include "twinbeam/errors.hpp"
#include "twinbeam/jsa.hpp"
#include "twinbeam/photonstats.hpp"
#include "twinbeam/schmidt.hpp"

namespace twinbeam {

namespace {

double sweep_value(const SweepSpec& sweep, int index) {
  if (sweep.points == 1) return sweep.lo;
  return sweep.lo +
         (sweep.hi - sweep.lo) * static_cast<double>(index) / (sweep.points - 1);
}

}  // namespace

std::vector<GddSweepRow> run_gdd_sweep(const RunConfig& config, int workers) {
  config.validate();
  if (workers < 1) throw std::invalid_argument("run_gdd_sweep: workers must be >= 1");

  const FrequencyGrid grid = default_grid(config.crystal, config.pump,
                                          config.grid.n_points,
                                          config.grid.span_lobes);
  const int points = config.sweep.points;
  std::vector<GddSweepRow> rows(static_cast<std::size_t>(points));

  std::atomic<int> next{0};
  auto work = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= points) return;
      GddSweepRow& row = rows[static_cast<std::size_t>(i)];
      row.gdd_fs2 = sweep_value(config.sweep, i);
      const double nan = std::numeric_limits<double>::quiet_NaN();
      try {
        row.tau_pump_fs = stretched_duration(config.pump.tau_fwhm_fs, row.gdd_fs2);
        PumpConfig pump = config.pump;
        pump.gdd_fs2 = row.gdd_fs2;
        const JsaMatrix jsa = build_jsa(config.crystal, pump, grid);
        const Eigen::VectorXd lam = schmidt_eigenvalues(jsa);
        row.k_lg = schmidt_number(lam);
        const HighGainPopulation pop = high_gain_populations(lam, config.gain);
        row.k_hg = k_high_gain(pop);
        const EntropyReport rep = entropy_report(pop);
        row.s_mod = rep.modal;
        row.s_occ = rep.occupational;
        row.s_total = rep.total;
      } catch (const std::exception& e) {
        row.error = e.what();
        row.k_lg = row.k_hg = row.s_mod = row.s_occ = row.s_total = nan;
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return rows;
}

std::vector<PowerSweepRow> run_power_sweep(const RunConfig& config) {
  config.validate();
  if (config.sweep.lo < 0.0)
    throw ConfigError("power sweep: pump photon numbers must be >= 0");
  std::vector<PowerSweepRow> rows(static_cast<std::size_t>(config.sweep.points));
  for (int i = 0; i < config.sweep.points; ++i) {
    PowerSweepRow& row = rows[static_cast<std::size_t>(i)];
    row.n_pump = sweep_value(config.sweep, i);
    row.gain = config.brightness_a * std::sqrt(row.n_pump);
    row.n_signal = mean_photons(row.gain);
  }
  return rows;
}

double fit_min_entropy_offset(std::span<const double> model_gdd,
                              std::span<const double> model_smod,
                              std::span<const double> data_gdd,
                              std::span<const double> data_smod) {
  if (model_gdd.size() != model_smod.size() || model_gdd.size() < 2)
    throw std::invalid_argument("fit_min_entropy_offset: bad model curve");
  if (data_gdd.size() != data_smod.size() || data_gdd.empty())
    throw std::invalid_argument("fit_min_entropy_offset: bad data");

  auto interp = [&](double x) {
    for (std::size_t i = 0; i + 1 < model_gdd.size(); ++i) {
      if (x >= model_gdd[i] && x <= model_gdd[i + 1]) {
        const double t = (x - model_gdd[i]) / (model_gdd[i + 1] - model_gdd[i]);
        return model_smod[i] + t * (model_smod[i + 1] - model_smod[i]);
      }
    }
    return std::numeric_limits<double>::quiet_NaN();
  };

  std::vector<double> residuals;
  for (std::size_t i = 0; i < data_gdd.size(); ++i) {
    const double m = interp(data_gdd[i]);
    if (std::isnan(m)) continue;
    residuals.push_back(data_smod[i] - m);
  }
  if (residuals.empty())
    throw NumericalError(
        "fit_min_entropy_offset: no data points overlap the model GDD range");

  // Golden-section over a bracket that always contains the LS optimum
  // (the mean residual).
  double lo = residuals[0], hi = residuals[0];
  for (const double r : residuals) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  lo -= 1.0;
  hi += 1.0;
  const double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  auto cost = [&](double c) {
    double acc = 0.0;
    for (const double r : residuals) acc += (r - c) * (r - c);
    return acc;
  };
  double f1 = cost(x1), f2 = cost(x2);
  while (hi - lo > 1e-8 * (1.0 + std::abs(lo) + std::abs(hi))) {
    if (f1 < f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = cost(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = cost(x2);
    }
  }
  double offset = 0.5 * (lo + hi);

  // Keep the shifted model inside [0, 1].
  double model_min = model_smod[0], model_max = model_smod[0];
  for (const double v : model_smod) {
    model_min = std::min(model_min, v);
    model_max = std::max(model_max, v);
  }
  offset = std::max(offset, -model_min);
  offset = std::min(offset, 1.0 - model_max);
  return offset;
}

namespace {

void write_provenance(const RunConfig& config, const char* kind,
                      std::ostream& os) {
  os << "# twinbeam " << kind << "\n";
  os << "# version: " << kVersion << "\n";
  os << "# config_hash: " << config_hash(config) << "\n";
  os << "# seed: " << config.seed << "\n";
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Error messages go into a CSV field; strip the delimiter.
std::string csv_safe(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n') c = ';';
  return s;
}

}  // namespace

void write_gdd_sweep_csv(const std::vector<GddSweepRow>& rows,
                         const RunConfig& config, std::ostream& os) {
  write_provenance(config, "gdd-sweep", os);
  os << "gdd_fs2,tau_pump_fs,k_lg,k_hg,s_mod,s_occ,s_total,error\n";
  for (const auto& r : rows) {
    os << fmt(r.gdd_fs2) << ',' << fmt(r.tau_pump_fs) << ',' << fmt(r.k_lg)
       << ',' << fmt(r.k_hg) << ',' << fmt(r.s_mod) << ',' << fmt(r.s_occ)
       << ',' << fmt(r.s_total) << ',' << csv_safe(r.error) << '\n';
  }
}

void write_power_sweep_csv(const std::vector<PowerSweepRow>& rows,
                           const RunConfig& config, std::ostream& os) {
  write_provenance(config, "power-sweep", os);
  os << "n_pump,gain,n_signal\n";
  for (const auto& r : rows)
    os << fmt(r.n_pump) << ',' << fmt(r.gain) << ',' << fmt(r.n_signal) << '\n';
}

}  // namespace twinbeam
