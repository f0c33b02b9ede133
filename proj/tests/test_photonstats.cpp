#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "twinbeam/entropy.hpp"
#include "twinbeam/errors.hpp"
#include "twinbeam/jsa.hpp"
#include "twinbeam/photonstats.hpp"
#include "twinbeam/rng.hpp"
#include "twinbeam/schmidt.hpp"

using namespace twinbeam;

TEST_SUITE("photonstats") {

TEST_CASE("gain arithmetic") {
  CHECK(mean_photons(0.0) == 0.0);
  CHECK(invert_gain(0.0) == 0.0);

  // arcsinh(sqrt(N)): frozen direct evaluations
  CHECK(invert_gain(1e11) == doctest::Approx(13.35736519).epsilon(1e-9));
  CHECK(invert_gain(1.296e8) == doctest::Approx(10.03312885).epsilon(1e-9));

  for (double g = 0.0; g <= 20.0; g += 0.25)
    CHECK(invert_gain(mean_photons(g)) == doctest::Approx(g).epsilon(1e-10));
}

TEST_CASE("brightness fit recovers the generating coefficient") {
  const double a_true = 3.8e-6;
  std::vector<std::pair<double, double>> points;
  for (const double np : {5e11, 1e12, 2e12, 4e12, 8e12})
    points.emplace_back(np, mean_photons(a_true * std::sqrt(np)));
  const double a = fit_brightness_curve(points);
  CHECK(std::abs(a - a_true) < 1e-4 * a_true);
}

TEST_CASE("single point determines the coefficient exactly") {
  // reference point: G = 7.6 at N_P = 4e12 -> a = 7.6/2e6 = 3.8e-6
  std::vector<std::pair<double, double>> points{
      {4e12, mean_photons(7.6)}};
  const double a = fit_brightness_curve(points);
  CHECK(a == doctest::Approx(3.8e-6).epsilon(1e-12));
  // extrapolated gain at 1.6e13 pump photons
  CHECK(a * std::sqrt(1.6e13) == doctest::Approx(15.2).epsilon(1e-12));
}

TEST_CASE("fit window drops saturated points") {
  const double a_true = 3.8e-6;
  std::vector<std::pair<double, double>> points;
  for (const double np : {1e12, 4e12, 8e12})
    points.emplace_back(np, mean_photons(a_true * std::sqrt(np)));
  // saturated outlier above the window bound
  points.emplace_back(1.5e13, 0.2 * mean_photons(a_true * std::sqrt(1.5e13)));
  const double a = fit_brightness_curve(points);
  CHECK(std::abs(a - a_true) < 1e-4 * a_true);
}

TEST_CASE("degenerate fit input") {
  std::vector<std::pair<double, double>> none;
  CHECK_THROWS_AS(fit_brightness_curve(none), NumericalError);
  std::vector<std::pair<double, double>> bad{{-1.0, 5.0}};
  CHECK_THROWS_AS(fit_brightness_curve(bad), NumericalError);
}

TEST_CASE("single-mode sampler matches the exponential distribution") {
  Eigen::VectorXd pi(1);
  pi << 1.0;
  const double n_total = 1.296e8;
  const ShotEnsemble shots = sample_shots(pi, n_total, 1000000, 2024);

  double mean = 0.0;
  for (const double n : shots.photons) mean += n;
  mean /= static_cast<double>(shots.photons.size());
  double var = 0.0;
  for (const double n : shots.photons) var += (n - mean) * (n - mean);
  var /= static_cast<double>(shots.photons.size());
  const double sd = std::sqrt(var);

  CHECK(std::abs(mean - n_total) / n_total < 0.005);
  CHECK(std::abs(sd - n_total) / n_total < 0.01);

  // Kolmogorov-Smirnov against the exponential CDF
  std::vector<double> sorted = shots.photons;
  std::sort(sorted.begin(), sorted.end());
  double ks = 0.0;
  const double count = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = 1.0 - std::exp(-sorted[i] / n_total);
    ks = std::max(ks, std::abs(cdf - (static_cast<double>(i) + 1.0) / count));
    ks = std::max(ks, std::abs(cdf - static_cast<double>(i) / count));
  }
  CHECK(ks < 0.002);
}

TEST_CASE("sampler is reproducible shot by shot") {
  Eigen::VectorXd pi(3);
  pi << 0.7, 0.2, 0.1;
  const ShotEnsemble batch = sample_shots(pi, 1e6, 64, 77);
  // Each shot depends only on (seed, shot index, pi): drawing any single
  // shot through its own substream reproduces the batch entry.
  for (const int s : {0, 5, 63}) {
    SubstreamRng rng(77, static_cast<std::uint64_t>(s));
    double total = 0.0;
    for (int n = 0; n < 3; ++n) total += rng.exponential(pi(n) * 1e6);
    CHECK(total == batch.photons[static_cast<std::size_t>(s)]);
  }
  const ShotEnsemble again = sample_shots(pi, 1e6, 64, 77);
  CHECK(std::equal(batch.photons.begin(), batch.photons.end(),
                   again.photons.begin()));
}

TEST_CASE("sampler preconditions") {
  Eigen::VectorXd pi(1);
  pi << 1.0;
  CHECK_THROWS_AS(sample_shots(pi, 0.0, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_shots(pi, 1.0, 0, 1), std::invalid_argument);
  Eigen::VectorXd unnorm(2);
  unnorm << 0.5, 0.1;
  CHECK_THROWS_AS(sample_shots(unnorm, 1.0, 10, 1), std::invalid_argument);
}

TEST_CASE("discrete sampler: Bose-Einstein statistics at low mean") {
  Eigen::VectorXd pi(1);
  pi << 1.0;
  const double mean_n = 5.0;
  const ShotEnsemble shots =
      sample_shots(pi, mean_n, 200000, 11, SamplingModel::Discrete);
  double mean = 0.0;
  for (const double n : shots.photons) mean += n;
  mean /= static_cast<double>(shots.photons.size());
  CHECK(std::abs(mean - mean_n) / mean_n < 0.01);
  // exact estimator <N(N-1)>/<N>^2 -> 2 for a thermal mode
  CHECK(g2_estimator_exact(shots) == doctest::Approx(2.0).epsilon(0.02));
  // integer-valued samples
  for (int s = 0; s < 100; ++s)
    CHECK(shots.photons[static_cast<std::size_t>(s)] ==
          std::floor(shots.photons[static_cast<std::size_t>(s)]));
}

TEST_CASE("g2 estimator on constant samples is 1") {
  ShotEnsemble shots;
  shots.photons = {3.0, 3.0, 3.0};
  shots.total_mean = 3.0;
  CHECK(g2_estimator(shots) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("g2 estimator rejects zero-mean ensembles") {
  ShotEnsemble shots;
  shots.photons = {0.0, 0.0};
  CHECK_THROWS_AS(g2_estimator(shots), NumericalError);
}

TEST_CASE("g2 theory") {
  Eigen::VectorXd single(1);
  single << 1.0;
  CHECK(g2_theory(single) == doctest::Approx(2.0).epsilon(1e-15));

  Eigen::VectorXd triple(3);
  triple << 0.7, 0.2, 0.1;
  CHECK(g2_theory(triple) == doctest::Approx(1.54).epsilon(1e-12));
}

TEST_CASE("K from g2") {
  CHECK(k_from_g2(2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(k_from_g2(1.5) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(k_from_g2(1.95) == doctest::Approx(1.0526316).epsilon(1e-6));
  CHECK_THROWS_AS(k_from_g2(1.0), NumericalError);
  CHECK_THROWS_AS(k_from_g2(0.9), NumericalError);
}

TEST_CASE("k_from_g2 of g2_theory is the inverse participation ratio") {
  Eigen::VectorXd pi(4);
  pi << 0.4, 0.3, 0.2, 0.1;
  const double ipr = 1.0 / pi.array().square().sum();
  CHECK(k_from_g2(g2_theory(pi)) == doctest::Approx(ipr).epsilon(1e-14));
}

TEST_CASE("Monte Carlo closes on the theory within 5 standard errors") {
  const struct {
    std::vector<double> pi;
  } cases[] = {
      {{1.0}},
      {{0.7, 0.2, 0.1}},
      {{0.3, 0.25, 0.2, 0.15, 0.1}},
      {{0.125, 0.125, 0.125, 0.125, 0.125, 0.125, 0.125, 0.125}},
  };
  std::uint64_t seed = 5150;
  for (const auto& c : cases) {
    Eigen::VectorXd pi = Eigen::Map<const Eigen::VectorXd>(
        c.pi.data(), static_cast<Eigen::Index>(c.pi.size()));
    const ShotEnsemble shots = sample_shots(pi, 1e8, 1000000, seed++);
    const double est = g2_estimator(shots);
    const double err = g2_batched_stderr(shots);
    CHECK(std::abs(est - g2_theory(pi)) < 5.0 * err);
  }
}

TEST_CASE("full pipeline: JSA modes feed the sampler consistently") {
  CrystalConfig crystal;
  PumpConfig pump;
  pump.gdd_fs2 = 40000.0;  // a few modes populated
  const JsaMatrix jsa = build_jsa(crystal, pump, default_grid(crystal, pump, 128));
  const HighGainPopulation pop =
      high_gain_populations(schmidt_eigenvalues(jsa), 10.0);
  const ShotEnsemble shots = sample_shots(pop.weights, 1e8, 400000, 31415);
  const double est = g2_estimator(shots);
  const double err = g2_batched_stderr(shots);
  CHECK(std::abs(est - g2_theory(pop.weights)) < 5.0 * err);
}

TEST_CASE("histogram covers every shot once") {
  Eigen::VectorXd pi(1);
  pi << 1.0;
  const ShotEnsemble shots = sample_shots(pi, 100.0, 5000, 8);
  const Histogram h = histogram(shots, 32);
  std::uint64_t total = 0;
  for (const auto c : h.counts) total += c;
  CHECK(total == shots.photons.size());
  CHECK(h.edges.size() == h.counts.size() + 1);
  CHECK(h.edges.front() == 0.0);
}

}  // TEST_SUITE
