#pragma once

namespace twinbeam {

// Working units: length um, time fs, angular frequency rad/fs,
// wavenumber rad/um, temperature K.
inline constexpr double kSpeedOfLightUmPerFs = 0.299792458;

// 2*sqrt(ln 2): converts a Gaussian intensity FWHM to the conjugate
// amplitude-spectral standard deviation (and back).
inline constexpr double kTwoSqrtLn2 = 1.6651092223153954;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline double omega_from_wavelength(double lambda_um) {
  return 2.0 * kPi * kSpeedOfLightUmPerFs / lambda_um;
}

inline double wavelength_from_omega(double omega_rad_fs) {
  return 2.0 * kPi * kSpeedOfLightUmPerFs / omega_rad_fs;
}

}  // namespace twinbeam
