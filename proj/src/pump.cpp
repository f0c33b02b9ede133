#include "twinbeam/pump.hpp"

#include <cmath>
#include <stdexcept>

#include "twinbeam/constants.hpp"
#include "twinbeam/errors.hpp"

namespace twinbeam {

double PumpConfig::center_omega() const {
  return omega_from_wavelength(center_wavelength_um);
}

void PumpConfig::validate() const {
  if (!(center_wavelength_um > 0.0))
    throw ConfigError("pump: center_wavelength_um must be > 0");
  if (!(tau_fwhm_fs > 0.0)) throw ConfigError("pump: tau_fwhm_fs must be > 0");
}

double spectral_sigma(double tau_fwhm_fs) {
  if (!(tau_fwhm_fs > 0.0))
    throw std::domain_error("spectral_sigma: tau_fwhm must be > 0");
  return kTwoSqrtLn2 / tau_fwhm_fs;
}

double tau_from_sigma(double sigma_rad_fs) {
  if (!(sigma_rad_fs > 0.0))
    throw std::domain_error("tau_from_sigma: sigma must be > 0");
  return kTwoSqrtLn2 / sigma_rad_fs;
}

std::complex<double> envelope(double detuning_rad_fs, const PumpConfig& pump) {
  const double sigma = spectral_sigma(pump.tau_fwhm_fs);
  const double x = detuning_rad_fs / sigma;
  const double mag = std::exp(-0.5 * x * x);
  const double phase = 0.5 * pump.gdd_fs2 * detuning_rad_fs * detuning_rad_fs;
  return std::polar(mag, phase);
}

double stretched_duration(double tau0_fs, double gdd_fs2) {
  if (!(tau0_fs > 0.0))
    throw std::domain_error("stretched_duration: tau0 must be > 0");
  const double x = 4.0 * std::log(2.0) * gdd_fs2 / (tau0_fs * tau0_fs);
  return tau0_fs * std::sqrt(1.0 + x * x);
}

}  // namespace twinbeam
