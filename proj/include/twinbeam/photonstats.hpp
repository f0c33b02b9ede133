#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace twinbeam {

// <N> = sinh^2 G and its inverse G = arcsinh(sqrt N).
double mean_photons(double gain);
double invert_gain(double mean_photons);

// Least-squares fit of log N_S = 2 log sinh(a sqrt(N_P)) over the
// unsaturated window N_P <= np_upper. Points above the window or with a
// nonpositive coordinate are ignored; golden-section minimization to
// relative tolerance 1e-8. A single surviving point determines a exactly.
double fit_brightness_curve(std::span<const std::pair<double, double>> points,
                            double np_upper = 1.4e13);

// Per-mode statistics model for the Monte-Carlo sampler. The bright
// continuous model draws exponential photon numbers (exact for <N> >> 1);
// the discrete model draws Bose-Einstein (geometric) integers, intended
// for <N> < 100.
enum class SamplingModel { BrightContinuous, Discrete };

struct ShotEnsemble {
  std::vector<double> photons;  // per-shot arm totals
  Eigen::VectorXd weights;      // pi used
  double total_mean = 0.0;
  std::uint64_t seed = 0;
};

// Thermal-mode sampler: shot s draws mode n from its substream with mean
// pi_n * total_mean and sums. Identical ensembles for any evaluation order.
ShotEnsemble sample_shots(const Eigen::VectorXd& weights, double total_mean,
                          int n_shots, std::uint64_t seed,
                          SamplingModel model = SamplingModel::BrightContinuous);

// Bright-regime estimator <N^2>/<N>^2 over shots.
double g2_estimator(const ShotEnsemble& ensemble);

// Exact form <N(N-1)>/<N>^2 for the discrete sampler.
double g2_estimator_exact(const ShotEnsemble& ensemble);

// Standard error of g2_estimator by batching (default 100 batches).
double g2_batched_stderr(const ShotEnsemble& ensemble, int n_batches = 100);

// g2(0) = 1 + sum pi_n^2 for independent thermal modes.
double g2_theory(const Eigen::VectorXd& weights);

// K = 1/(g2 - 1); throws for g2 <= 1 (super-thermal assumption violated).
double k_from_g2(double g2);

struct Histogram {
  std::vector<double> edges;   // n_bins + 1
  std::vector<std::uint64_t> counts;
};

Histogram histogram(const ShotEnsemble& ensemble, int n_bins = 64);

}  // namespace twinbeam
