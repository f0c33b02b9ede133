// twinbeam: simulator and analysis toolkit for multimode high-gain
// parametric down-conversion in periodically poled lithium niobate.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "twinbeam/analysis.hpp"
#include "twinbeam/config.hpp"
#include "twinbeam/entropy.hpp"
#include "twinbeam/errors.hpp"
#include "twinbeam/gaussian.hpp"
#include "twinbeam/jsa.hpp"
#include "twinbeam/photonstats.hpp"
#include "twinbeam/schmidt.hpp"
#include "twinbeam/sweep.hpp"

namespace {

using json = nlohmann::json;
using namespace twinbeam;

struct CommonFlags {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  int workers = 1;
};

// Per-field overrides; a flag set on the command line wins over the file.
struct Overrides {
  std::optional<double> gdd, tau_fwhm, lambda0, temperature, poling, length;
  std::optional<double> gain, span_lobes, brightness_a;
  std::optional<int> n_points;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "INI configuration file");
  cmd->add_option("--out", flags.out_path, "output path (default: stdout)");
  cmd->add_option("--seed", flags.seed, "master RNG seed");
  cmd->add_option("--workers", flags.workers, "worker threads for sweeps")
      ->check(CLI::PositiveNumber);
}

void add_overrides(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--gdd", ov.gdd, "pump GDD, fs^2");
  cmd->add_option("--tau-fwhm", ov.tau_fwhm, "pump intensity FWHM, fs");
  cmd->add_option("--lambda-p", ov.lambda0, "pump center wavelength, um");
  cmd->add_option("--temperature", ov.temperature, "crystal temperature, K");
  cmd->add_option("--poling-period", ov.poling, "poling period, um");
  cmd->add_option("--crystal-length", ov.length, "crystal length, mm");
  cmd->add_option("--gain", ov.gain, "parametric gain G");
  cmd->add_option("--n-points", ov.n_points, "grid points per axis");
  cmd->add_option("--span-lobes", ov.span_lobes, "grid half-span in sinc lobes");
  cmd->add_option("--brightness-a", ov.brightness_a,
                  "gain per sqrt(pump photon) for power sweeps");
}

RunConfig make_config(const CommonFlags& flags, const Overrides& ov) {
  RunConfig cfg;
  if (!flags.config_path.empty()) cfg = load_config(flags.config_path);
  if (flags.seed) cfg.seed = *flags.seed;
  if (ov.gdd) cfg.pump.gdd_fs2 = *ov.gdd;
  if (ov.tau_fwhm) cfg.pump.tau_fwhm_fs = *ov.tau_fwhm;
  if (ov.lambda0) cfg.pump.center_wavelength_um = *ov.lambda0;
  if (ov.temperature) cfg.crystal.temperature_k = *ov.temperature;
  if (ov.poling) cfg.crystal.poling_period_um = *ov.poling;
  if (ov.length) cfg.crystal.length_mm = *ov.length;
  if (ov.gain) cfg.gain = *ov.gain;
  if (ov.n_points) cfg.grid.n_points = *ov.n_points;
  if (ov.span_lobes) cfg.grid.span_lobes = *ov.span_lobes;
  if (ov.brightness_a) cfg.brightness_a = *ov.brightness_a;
  cfg.validate();
  return cfg;
}

// Writes to --out or stdout.
void emit(const CommonFlags& flags, const std::string& text) {
  if (flags.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(flags.out_path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file: " + flags.out_path);
  f << text;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

int run_qpm_solve(const CommonFlags& flags, const Overrides& ov, bool as_json) {
  const RunConfig cfg = make_config(flags, ov);
  const QpmSolution sol = solve_qpm(cfg.pump.center_wavelength_um, cfg.crystal);
  std::ostringstream os;
  if (as_json) {
    json j{{"lambda_pump_um", cfg.pump.center_wavelength_um},
           {"lambda_signal_um", sol.lambda_signal_um},
           {"lambda_idler_um", sol.lambda_idler_um},
           {"temperature_k", cfg.crystal.temperature_k}};
    os << j.dump(2) << '\n';
  } else {
    os << "lambda_signal_um = " << fmt(sol.lambda_signal_um) << '\n'
       << "lambda_idler_um  = " << fmt(sol.lambda_idler_um) << '\n';
  }
  emit(flags, os.str());
  return 0;
}

int run_jsa_dump(const CommonFlags& flags, const Overrides& ov,
                 const std::string& field_name) {
  const RunConfig cfg = make_config(flags, ov);
  const FrequencyGrid grid =
      default_grid(cfg.crystal, cfg.pump, cfg.grid.n_points, cfg.grid.span_lobes);
  const JsaMatrix jsa = build_jsa(cfg.crystal, cfg.pump, grid);
  JsaField field = JsaField::Abs;
  if (field_name == "abs2") field = JsaField::Abs2;
  else if (field_name == "re") field = JsaField::Re;
  else if (field_name == "im") field = JsaField::Im;
  else if (field_name != "abs")
    throw ConfigError("jsa: --field must be abs, abs2, re or im");
  std::ostringstream os;
  os << "# twinbeam jsa\n# version: " << kVersion
     << "\n# config_hash: " << config_hash(cfg) << "\n# field: " << field_name
     << "\n";
  write_jsa_csv(jsa, os, field);
  emit(flags, os.str());
  return 0;
}

int run_schmidt(const CommonFlags& flags, const Overrides& ov, int n_report) {
  const RunConfig cfg = make_config(flags, ov);
  const FrequencyGrid grid =
      default_grid(cfg.crystal, cfg.pump, cfg.grid.n_points, cfg.grid.span_lobes);
  const JsaMatrix jsa = build_jsa(cfg.crystal, cfg.pump, grid);
  const SchmidtSpectrum spec = decompose(jsa);
  const HighGainPopulation pop = high_gain_populations(spec.eigenvalues, cfg.gain);
  const EntropyReport rep = entropy_report(pop);

  std::ostringstream table;
  table << "# twinbeam schmidt\n# version: " << kVersion
        << "\n# config_hash: " << config_hash(cfg) << "\n";
  table << "# K_LG: " << fmt(schmidt_number(spec.eigenvalues)) << "\n";
  table << "# K_HG(G=" << fmt(cfg.gain) << "): " << fmt(k_high_gain(pop)) << "\n";
  table << "# S_occ: " << fmt(rep.occupational) << "  S_mod: " << fmt(rep.modal)
        << "  S_total: " << fmt(rep.total) << "\n";
  table << "n,lambda_n,pi_n\n";
  const Eigen::Index rows = std::min<Eigen::Index>(n_report, spec.eigenvalues.size());
  for (Eigen::Index n = 0; n < rows; ++n) {
    const double pi_n = n < pop.weights.size() ? pop.weights(n) : 0.0;
    table << n + 1 << ',' << fmt(spec.eigenvalues(n)) << ',' << fmt(pi_n) << '\n';
  }
  emit(flags, table.str());

  // Mode-profile dump beside --out (first two intensity modes, as presented
  // in spectral-mode figures: second mode is usually plotted x10).
  if (!flags.out_path.empty()) {
    const std::string mode_path = flags.out_path + ".modes.csv";
    std::ofstream f(mode_path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file: " + mode_path);
    f << "omega_s,mode1_intensity,mode2_intensity\n";
    for (Eigen::Index i = 0; i < grid.signal.size(); ++i) {
      const double m1 = std::norm(spec.signal_modes(i, 0));
      const double m2 =
          spec.signal_modes.cols() > 1 ? std::norm(spec.signal_modes(i, 1)) : 0.0;
      f << fmt(grid.signal(i)) << ',' << fmt(m1) << ',' << fmt(m2) << '\n';
    }
  }
  return 0;
}

int run_gdd_sweep_cmd(const CommonFlags& flags, const Overrides& ov) {
  const RunConfig cfg = make_config(flags, ov);
  const auto rows = run_gdd_sweep(cfg, flags.workers);
  std::ostringstream os;
  write_gdd_sweep_csv(rows, cfg, os);
  emit(flags, os.str());
  return 0;
}

int run_power_sweep_cmd(const CommonFlags& flags, const Overrides& ov,
                        const std::string& fit_data_path, double np_upper) {
  RunConfig cfg = make_config(flags, ov);
  if (cfg.sweep.variable != SweepSpec::Variable::PumpPower) {
    // A GDD range does not describe pump photon numbers; use a sensible
    // default window when the config was not written for power sweeps.
    cfg.sweep.variable = SweepSpec::Variable::PumpPower;
    cfg.sweep.lo = 0.0;
    cfg.sweep.hi = 1.6e13;
  }
  std::ostringstream extra;
  if (!fit_data_path.empty()) {
    // overlay: refit the gain coefficient from measured (N_P, N_S) points
    std::ifstream f(fit_data_path);
    if (!f) throw ConfigError("cannot open data file: " + fit_data_path);
    std::vector<std::pair<double, double>> points;
    std::string line;
    while (std::getline(f, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::stringstream ss(line);
      std::string a, b;
      if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',')) continue;
      try {
        points.emplace_back(std::stod(a), std::stod(b));
      } catch (const std::exception&) {
        continue;  // header row
      }
    }
    cfg.brightness_a = fit_brightness_curve(points, np_upper);
    extra << "# fitted_a: " << cfg.brightness_a << " (from " << fit_data_path
          << ", window N_P <= " << np_upper << ")\n";
  }
  const auto rows = run_power_sweep(cfg);
  std::ostringstream os;
  write_power_sweep_csv(rows, cfg, os);
  emit(flags, extra.str() + os.str());
  return 0;
}

int run_g2_sim(const CommonFlags& flags, const Overrides& ov,
               std::vector<double> weights, double n_total, int n_shots,
               bool discrete, const std::string& hist_path) {
  const RunConfig cfg = make_config(flags, ov);

  Eigen::VectorXd pi;
  if (!weights.empty()) {
    pi = Eigen::Map<Eigen::VectorXd>(weights.data(),
                                     static_cast<Eigen::Index>(weights.size()));
    const double total = pi.sum();
    if (!(total > 0.0)) throw ConfigError("g2-sim: weights must be positive");
    pi /= total;
  } else {
    // Derive the modal weights from the configured source model.
    const FrequencyGrid grid = default_grid(cfg.crystal, cfg.pump,
                                            cfg.grid.n_points, cfg.grid.span_lobes);
    const JsaMatrix jsa = build_jsa(cfg.crystal, cfg.pump, grid);
    pi = high_gain_populations(schmidt_eigenvalues(jsa), cfg.gain).weights;
  }

  const auto model = discrete ? SamplingModel::Discrete
                              : SamplingModel::BrightContinuous;
  const ShotEnsemble shots = sample_shots(pi, n_total, n_shots, cfg.seed, model);
  const double g2 = discrete ? g2_estimator_exact(shots) : g2_estimator(shots);
  const double stderr_g2 = g2_batched_stderr(shots);

  double mean = 0.0;
  for (const double n : shots.photons) mean += n;
  mean /= static_cast<double>(shots.photons.size());
  double var = 0.0;
  for (const double n : shots.photons) var += (n - mean) * (n - mean);
  var /= static_cast<double>(shots.photons.size());

  json j{{"mean", mean},
         {"std", std::sqrt(var)},
         {"g2", g2},
         {"g2_theory", g2_theory(pi)},
         {"K_g2", g2 > 1.0 ? json(k_from_g2(g2)) : json()},
         {"stderr", stderr_g2},
         {"shots", n_shots},
         {"seed", cfg.seed}};
  emit(flags, j.dump(2) + "\n");

  if (!hist_path.empty()) {
    const Histogram h = histogram(shots);
    std::ofstream f(hist_path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file: " + hist_path);
    f << "bin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b)
      f << fmt(h.edges[b]) << ',' << fmt(h.edges[b + 1]) << ',' << h.counts[b]
        << '\n';
  }
  return 0;
}

int run_condition(const CommonFlags& flags, std::vector<double> r_list,
                  std::vector<double> mu_list, std::vector<double> phi_list,
                  int n_photons, int cutoff) {
  if (!mu_list.empty()) {
    if (!r_list.empty())
      throw ConfigError("condition: give either --r or --mu, not both");
    for (const double mu : mu_list) {
      if (!(mu >= 0.0 && mu < 1.0))
        throw ConfigError("condition: |mu| must lie in [0, 1)");
      r_list.push_back(std::atanh(mu));
    }
  }
  if (r_list.empty()) throw ConfigError("condition: provide --r or --mu values");
  if (phi_list.empty()) phi_list.assign(r_list.size(), 0.0);
  if (phi_list.size() != r_list.size())
    throw ConfigError("condition: --phi length must match the mode count");
  TmssState state;
  state.squeezing = Eigen::Map<Eigen::VectorXd>(
      r_list.data(), static_cast<Eigen::Index>(r_list.size()));
  state.phases = Eigen::Map<Eigen::VectorXd>(
      phi_list.data(), static_cast<Eigen::Index>(phi_list.size()));
  if (cutoff < 0) cutoff = n_photons;
  const ConditionedState cond = condition_idler(state, n_photons, cutoff);

  json components = json::array();
  for (const auto& c : cond.components)
    components.push_back({{"weight", c.weight}, {"occupation", c.occupation}});
  json j{{"photon_count", n_photons},
         {"purity", cond.purity},
         {"components", components}};
  emit(flags, j.dump(2) + "\n");
  return 0;
}

int run_analyze(const CommonFlags& flags, const Overrides& ov,
                const std::string& in_path, int n_shots, int n_subsets,
                double noise_std) {
  const RunConfig cfg = make_config(flags, ov);
  SpectraEnsemble ensemble;
  if (!in_path.empty()) {
    std::ifstream f(in_path);
    if (!f) throw ConfigError("cannot open spectra file: " + in_path);
    ensemble = read_spectra_csv(f);
  } else {
    const FrequencyGrid grid = default_grid(cfg.crystal, cfg.pump,
                                            cfg.grid.n_points, cfg.grid.span_lobes);
    const JsaMatrix jsa = build_jsa(cfg.crystal, cfg.pump, grid);
    const SchmidtSpectrum spec = decompose(jsa);
    const HighGainPopulation pop = high_gain_populations(spec.eigenvalues, cfg.gain);
    const Eigen::Index keep = pop.photons.size();
    ensemble = simulate_shot_spectra(spec.signal_modes.leftCols(keep),
                                     pop.photons, n_shots, cfg.seed, noise_std,
                                     grid.signal);
  }

  const G1Estimate est = g1_from_covariance(ensemble);
  const BootstrapResult boot = bootstrap_k(ensemble, n_subsets);
  json j{{"K", est.schmidt_number},
         {"K_bootstrap_mean", boot.k_mean},
         {"K_bootstrap_std", boot.k_std},
         {"subsets", boot.subsets_used},
         {"shots", ensemble.intensities.rows()},
         {"bins", ensemble.intensities.cols()},
         {"seed", ensemble.seed}};
  if (!est.warning.empty()) j["warning"] = est.warning;
  if (!boot.warning.empty()) j["bootstrap_warning"] = boot.warning;
  emit(flags, j.dump(2) + "\n");
  return 0;
}

int run_fit(const CommonFlags& flags, const std::string& kind,
            const std::string& in_path, double np_upper) {
  std::ifstream f(in_path);
  if (!f) throw ConfigError("cannot open data file: " + in_path);

  if (kind == "brightness") {
    // Two columns: N_P, N_S.
    std::vector<std::pair<double, double>> points;
    std::string line;
    while (std::getline(f, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::stringstream ss(line);
      std::string a, b;
      if (!std::getline(ss, a, ',') || !std::getline(ss, b, ','))
        throw ConfigError("fit: expected two columns N_P,N_S");
      try {
        points.emplace_back(std::stod(a), std::stod(b));
      } catch (const std::exception&) {
        continue;  // header row
      }
    }
    const double a = fit_brightness_curve(points, np_upper);
    json j{{"a", a},
           {"np_upper", np_upper},
           {"gain_at_4e12", a * std::sqrt(4e12)},
           {"points", points.size()}};
    emit(flags, j.dump(2) + "\n");
    return 0;
  }

  if (kind == "entropy-offset") {
    // Four columns accepted as two files would be awkward; the file holds
    // model_gdd,model_smod,data_gdd,data_smod with nan padding allowed.
    std::vector<double> mg, ms, dg, ds;
    std::string line;
    while (std::getline(f, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::stringstream ss(line);
      std::string cell;
      std::vector<double> row;
      while (std::getline(ss, cell, ',')) {
        try {
          row.push_back(std::stod(cell));
        } catch (const std::exception&) {
          row.push_back(std::numeric_limits<double>::quiet_NaN());
        }
      }
      if (row.size() < 4) continue;
      if (!std::isnan(row[0]) && !std::isnan(row[1])) {
        mg.push_back(row[0]);
        ms.push_back(row[1]);
      }
      if (!std::isnan(row[2]) && !std::isnan(row[3])) {
        dg.push_back(row[2]);
        ds.push_back(row[3]);
      }
    }
    const double offset = fit_min_entropy_offset(mg, ms, dg, ds);
    json j{{"offset", offset}};
    emit(flags, j.dump(2) + "\n");
    return 0;
  }

  throw ConfigError("fit: --kind must be brightness or entropy-offset");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twinbeam: multimode high-gain PDC simulator and analysis"};
  app.require_subcommand(1);

  CommonFlags flags;
  Overrides ov;

  auto* qpm = app.add_subcommand("qpm-solve", "solve the QPM point");
  bool qpm_json = false;
  qpm->add_flag("--json", qpm_json, "JSON output");
  add_common(qpm, flags);
  add_overrides(qpm, ov);

  auto* jsa_cmd = app.add_subcommand("jsa", "build and dump the JSA");
  std::string jsa_field = "abs";
  jsa_cmd->add_option("--field", jsa_field, "abs|abs2|re|im");
  add_common(jsa_cmd, flags);
  add_overrides(jsa_cmd, ov);

  auto* schmidt_cmd =
      app.add_subcommand("schmidt", "Schmidt spectrum and mode profiles");
  int n_report = 16;
  schmidt_cmd->add_option("--modes", n_report, "eigenvalues to list");
  add_common(schmidt_cmd, flags);
  add_overrides(schmidt_cmd, ov);

  auto* gdd = app.add_subcommand("gdd-sweep", "K and entropy vs pump GDD");
  add_common(gdd, flags);
  add_overrides(gdd, ov);

  auto* power = app.add_subcommand("power-sweep", "N_S vs pump photon number");
  std::string power_fit_data;
  double power_np_upper = 1.4e13;
  power->add_option("--fit-data", power_fit_data,
                    "CSV of measured N_P,N_S points; refits the coefficient");
  power->add_option("--np-upper", power_np_upper, "saturation window bound");
  add_common(power, flags);
  add_overrides(power, ov);

  auto* g2 = app.add_subcommand("g2-sim", "thermal-mode Monte-Carlo g2(0)");
  std::vector<double> g2_weights;
  double g2_ntotal = 1e8;
  int g2_shots = 1000000;
  bool g2_discrete = false;
  std::string g2_hist;
  g2->add_option("--pi", g2_weights, "modal weights (default: from config)");
  g2->add_option("--n-total", g2_ntotal, "mean photons per pulse");
  g2->add_option("--shots", g2_shots, "number of shots")->check(CLI::PositiveNumber);
  g2->add_flag("--discrete", g2_discrete, "Bose-Einstein sampler (<N> < 100)");
  g2->add_option("--hist", g2_hist, "histogram CSV path");
  add_common(g2, flags);
  add_overrides(g2, ov);

  auto* cond = app.add_subcommand("condition", "photon-number conditioned idler");
  std::vector<double> cond_r, cond_mu, cond_phi;
  int cond_n = 1, cond_cutoff = -1;
  cond->add_option("--r", cond_r, "squeezing parameters r_n");
  cond->add_option("--mu", cond_mu, "|mu_n| = tanh r_n (alternative to --r)");
  cond->add_option("--phi", cond_phi, "squeezing phases (default 0)");
  cond->add_option("--n", cond_n, "conditioned photon count");
  cond->add_option("--cutoff", cond_cutoff, "per-mode occupation cap (default N)");
  add_common(cond, flags);

  auto* analyze = app.add_subcommand(
      "analyze", "spectral-covariance K with bootstrap uncertainty");
  std::string analyze_in;
  int analyze_shots = 100000, analyze_subsets = 60;
  double analyze_noise = 0.0;
  analyze->add_option("--in", analyze_in,
                      "spectra CSV (one shot per row; default: simulate)");
  analyze->add_option("--shots", analyze_shots, "simulated shots");
  analyze->add_option("--subsets", analyze_subsets, "bootstrap subsets");
  analyze->add_option("--noise-std", analyze_noise, "additive intensity noise");
  add_common(analyze, flags);
  add_overrides(analyze, ov);

  auto* fit = app.add_subcommand("fit", "brightness or entropy-offset fits");
  std::string fit_kind = "brightness", fit_in;
  double fit_np_upper = 1.4e13;
  fit->add_option("--kind", fit_kind, "brightness|entropy-offset");
  fit->add_option("--in", fit_in, "data CSV")->required();
  fit->add_option("--np-upper", fit_np_upper, "saturation window bound");
  add_common(fit, flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (qpm->parsed()) return run_qpm_solve(flags, ov, qpm_json);
    if (jsa_cmd->parsed()) return run_jsa_dump(flags, ov, jsa_field);
    if (schmidt_cmd->parsed()) return run_schmidt(flags, ov, n_report);
    if (gdd->parsed()) return run_gdd_sweep_cmd(flags, ov);
    if (power->parsed())
      return run_power_sweep_cmd(flags, ov, power_fit_data, power_np_upper);
    if (g2->parsed())
      return run_g2_sim(flags, ov, g2_weights, g2_ntotal, g2_shots, g2_discrete,
                        g2_hist);
    if (cond->parsed())
      return run_condition(flags, cond_r, cond_mu, cond_phi, cond_n, cond_cutoff);
    if (analyze->parsed())
      return run_analyze(flags, ov, analyze_in, analyze_shots, analyze_subsets,
                         analyze_noise);
    if (fit->parsed()) return run_fit(flags, fit_kind, fit_in, fit_np_upper);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "resource refusal: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
