#include "twinbeam/entropy.hpp"

#include <cmath>
#include <stdexcept>

namespace twinbeam {

double mode_linear_entropy(double mean_photons) {
  if (!(mean_photons >= 0.0))
    throw std::domain_error("mode_linear_entropy: mean photon number < 0");
  return 2.0 * mean_photons / (2.0 * mean_photons + 1.0);
}

double occupational_entropy(const HighGainPopulation& pop) {
  double acc = 0.0;
  for (Eigen::Index n = 0; n < pop.weights.size(); ++n)
    acc += pop.weights(n) * pop.weights(n) * mode_linear_entropy(pop.photons(n));
  return acc;
}

double total_entropy(const Eigen::VectorXd& photons) {
  double log_purity = 0.0;
  for (Eigen::Index n = 0; n < photons.size(); ++n) {
    if (!(photons(n) >= 0.0))
      throw std::domain_error("total_entropy: mean photon number < 0");
    log_purity -= std::log1p(2.0 * photons(n));
  }
  return 1.0 - std::exp(log_purity);
}

double modal_entropy(const HighGainPopulation& pop) {
  return total_entropy(pop.photons) - occupational_entropy(pop);
}

EntropyReport entropy_report(const HighGainPopulation& pop) {
  EntropyReport r;
  r.per_mode.resize(pop.photons.size());
  for (Eigen::Index n = 0; n < pop.photons.size(); ++n)
    r.per_mode(n) = mode_linear_entropy(pop.photons(n));
  r.total = total_entropy(pop.photons);
  r.occupational = occupational_entropy(pop);
  r.modal = r.total - r.occupational;
  r.classical = 1.0 - pop.weights.array().square().sum();
  return r;
}

}  // namespace twinbeam
