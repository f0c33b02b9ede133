#include "twinbeam/photonstats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "twinbeam/errors.hpp"
#include "twinbeam/rng.hpp"

namespace twinbeam {

double mean_photons(double gain) {
  if (!(gain >= 0.0)) throw std::domain_error("mean_photons: gain must be >= 0");
  const double sh = std::sinh(gain);
  return sh * sh;
}

double invert_gain(double mean) {
  if (!(mean >= 0.0))
    throw std::domain_error("invert_gain: photon number must be >= 0");
  return std::asinh(std::sqrt(mean));
}

namespace {

// log(sinh x) without overflow for large x.
double log_sinh(double x) {
  if (x > 20.0) return x - std::log(2.0) + std::log1p(-std::exp(-2.0 * x));
  return std::log(std::sinh(x));
}

// Golden-section minimization of f on [lo, hi] to relative tolerance.
template <typename F>
double golden_minimize(F f, double lo, double hi, double rel_tol) {
  const double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > rel_tol * (std::abs(a) + std::abs(b))) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double fit_brightness_curve(std::span<const std::pair<double, double>> points,
                            double np_upper) {
  std::vector<std::pair<double, double>> window;
  for (const auto& [np, ns] : points) {
    if (np > 0.0 && ns > 0.0 && np <= np_upper) window.emplace_back(np, ns);
  }
  if (window.empty())
    throw NumericalError(
        "fit_brightness_curve: no positive points inside the fit window");

  // Exact per-point inversions bracket the optimum.
  double a_lo = std::numeric_limits<double>::infinity(), a_hi = 0.0;
  for (const auto& [np, ns] : window) {
    const double a = invert_gain(ns) / std::sqrt(np);
    a_lo = std::min(a_lo, a);
    a_hi = std::max(a_hi, a);
  }
  if (window.size() == 1) return a_lo;

  auto objective = [&](double a) {
    double acc = 0.0;
    for (const auto& [np, ns] : window) {
      const double r = std::log(ns) - 2.0 * log_sinh(a * std::sqrt(np));
      acc += r * r;
    }
    return acc;
  };
  return golden_minimize(objective, 0.5 * a_lo, 2.0 * a_hi, 1e-8);
}

ShotEnsemble sample_shots(const Eigen::VectorXd& weights, double total_mean,
                          int n_shots, std::uint64_t seed, SamplingModel model) {
  if (weights.size() == 0)
    throw std::invalid_argument("sample_shots: empty weight vector");
  if (std::abs(weights.sum() - 1.0) > 1e-9 || (weights.array() < 0.0).any())
    throw std::invalid_argument("sample_shots: weights must be normalized");
  if (!(total_mean > 0.0))
    throw std::invalid_argument("sample_shots: total_mean must be > 0");
  if (n_shots < 1) throw std::invalid_argument("sample_shots: n_shots must be >= 1");

  ShotEnsemble out;
  out.weights = weights;
  out.total_mean = total_mean;
  out.seed = seed;
  out.photons.resize(static_cast<std::size_t>(n_shots));
  for (int s = 0; s < n_shots; ++s) {
    SubstreamRng rng(seed, static_cast<std::uint64_t>(s));
    double total = 0.0;
    for (Eigen::Index n = 0; n < weights.size(); ++n) {
      const double mean = weights(n) * total_mean;
      if (model == SamplingModel::BrightContinuous)
        total += rng.exponential(mean);
      else
        total += static_cast<double>(rng.geometric_photons(mean));
    }
    out.photons[static_cast<std::size_t>(s)] = total;
  }
  return out;
}

namespace {

void require_shots(const ShotEnsemble& e, std::size_t min_shots,
                   const char* who) {
  if (e.photons.size() < min_shots) {
    std::ostringstream os;
    os << who << ": needs >= " << min_shots << " shots";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

double g2_estimator(const ShotEnsemble& ensemble) {
  require_shots(ensemble, 2, "g2_estimator");
  double m1 = 0.0, m2 = 0.0;
  for (const double n : ensemble.photons) {
    m1 += n;
    m2 += n * n;
  }
  const double count = static_cast<double>(ensemble.photons.size());
  m1 /= count;
  m2 /= count;
  if (!(m1 > 0.0)) throw NumericalError("g2_estimator: zero-mean ensemble");
  return m2 / (m1 * m1);
}

double g2_estimator_exact(const ShotEnsemble& ensemble) {
  require_shots(ensemble, 2, "g2_estimator_exact");
  double m1 = 0.0, m2 = 0.0;
  for (const double n : ensemble.photons) {
    m1 += n;
    m2 += n * (n - 1.0);
  }
  const double count = static_cast<double>(ensemble.photons.size());
  m1 /= count;
  m2 /= count;
  if (!(m1 > 0.0)) throw NumericalError("g2_estimator_exact: zero-mean ensemble");
  return m2 / (m1 * m1);
}

double g2_batched_stderr(const ShotEnsemble& ensemble, int n_batches) {
  if (n_batches < 2)
    throw std::invalid_argument("g2_batched_stderr: needs >= 2 batches");
  const std::size_t per = ensemble.photons.size() / static_cast<std::size_t>(n_batches);
  if (per < 2)
    throw std::invalid_argument("g2_batched_stderr: batches too small");
  std::vector<double> g2s;
  g2s.reserve(static_cast<std::size_t>(n_batches));
  for (int b = 0; b < n_batches; ++b) {
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t s = static_cast<std::size_t>(b) * per;
         s < (static_cast<std::size_t>(b) + 1) * per; ++s) {
      const double n = ensemble.photons[s];
      m1 += n;
      m2 += n * n;
    }
    m1 /= static_cast<double>(per);
    m2 /= static_cast<double>(per);
    if (!(m1 > 0.0)) throw NumericalError("g2_batched_stderr: zero-mean batch");
    g2s.push_back(m2 / (m1 * m1));
  }
  double mean = 0.0;
  for (const double g : g2s) mean += g;
  mean /= static_cast<double>(g2s.size());
  double var = 0.0;
  for (const double g : g2s) var += (g - mean) * (g - mean);
  var /= static_cast<double>(g2s.size() - 1);
  return std::sqrt(var / static_cast<double>(g2s.size()));
}

double g2_theory(const Eigen::VectorXd& weights) {
  if (weights.size() == 0)
    throw std::invalid_argument("g2_theory: empty weight vector");
  if (std::abs(weights.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("g2_theory: weights must be normalized");
  return 1.0 + weights.array().square().sum();
}

double k_from_g2(double g2) {
  if (!(g2 > 1.0))
    throw NumericalError(
        "k_from_g2: g2 <= 1, super-thermal assumption violated");
  return 1.0 / (g2 - 1.0);
}

Histogram histogram(const ShotEnsemble& ensemble, int n_bins) {
  if (n_bins < 1) throw std::invalid_argument("histogram: n_bins must be >= 1");
  require_shots(ensemble, 1, "histogram");
  const double hi = *std::max_element(ensemble.photons.begin(),
                                      ensemble.photons.end());
  const double top = hi > 0.0 ? hi : 1.0;
  Histogram h;
  h.edges.resize(static_cast<std::size_t>(n_bins) + 1);
  h.counts.assign(static_cast<std::size_t>(n_bins), 0);
  for (int b = 0; b <= n_bins; ++b)
    h.edges[static_cast<std::size_t>(b)] = top * static_cast<double>(b) / n_bins;
  for (const double n : ensemble.photons) {
    auto b = static_cast<std::size_t>(n / top * n_bins);
    if (b >= h.counts.size()) b = h.counts.size() - 1;
    ++h.counts[b];
  }
  return h;
}

}  // namespace twinbeam
