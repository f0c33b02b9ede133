#pragma once

#include <complex>
#include <optional>

namespace twinbeam {

// Chirped Gaussian pump. sigma_p is the field-amplitude spectral standard
// deviation conjugate to the transform-limited *intensity* FWHM tau_fwhm:
// sigma_p = 2 sqrt(ln 2) / tau_fwhm. GDD adds the pure quadratic spectral
// phase exp(i GDD Omega^2 / 2) and leaves |alpha| untouched.
struct PumpConfig {
  double center_wavelength_um = 1.026;
  double tau_fwhm_fs = 260.0;
  double gdd_fs2 = 0.0;
  std::optional<double> pulse_energy_j;  // brightness bookkeeping only

  double center_omega() const;  // rad/fs
  void validate() const;
};

double spectral_sigma(double tau_fwhm_fs);  // rad/fs
double tau_from_sigma(double sigma_rad_fs);

// alpha(Omega) = exp(-Omega^2 / 2 sigma_p^2) exp(i GDD Omega^2 / 2),
// unnormalized; Omega is the detuning from the pump carrier.
std::complex<double> envelope(double detuning_rad_fs, const PumpConfig& pump);

// Intensity FWHM of a Gaussian pulse of transform-limited width tau0 after
// adding quadratic spectral phase: tau0 sqrt(1 + (4 ln2 gdd / tau0^2)^2).
double stretched_duration(double tau0_fs, double gdd_fs2);

}  // namespace twinbeam
