#pragma once

#include <complex>

namespace twinbeam {

// Temperature-dependent Sellmeier set for the extraordinary index,
//   n^2 = a1 + f*b1 + (a2 + f*b2)/(l^2 - (a3 + f*b3)^2)
//       + (a4 + f*b4)/(l^2 - a5^2) - a6*l^2,
// with l in um and f = T^2 - T_room^2 (T in K).
struct SellmeierCoefficients {
  double a1, a2, a3, a4, a5, a6;
  double b1, b2, b3, b4;
  double t_room_k;

  // Manufacturer set for MgO-doped congruent lithium niobate (e-wave).
  static SellmeierCoefficients mgo_lithium_niobate();
};

struct CrystalConfig {
  double poling_period_um = 27.91;
  double length_mm = 2.0;
  double temperature_k = 373.15;
  SellmeierCoefficients sellmeier = SellmeierCoefficients::mgo_lithium_niobate();

  double length_um() const { return length_mm * 1000.0; }
  void validate() const;  // throws ConfigError for nonpositive fields
};

// Wavelength window over which the Sellmeier fit is trusted, um.
inline constexpr double kLambdaMinUm = 0.3;
inline constexpr double kLambdaMaxUm = 5.5;

// Extraordinary index at wavelength (um) and temperature (K).
// Throws std::domain_error outside the validity window or if n^2 <= 1,
// identifying the offending term.
double refractive_index(double lambda_um, double temperature_k,
                        const SellmeierCoefficients& s);

// k(omega) = n(2 pi c / omega) * omega / c, rad/um.
double wavenumber(double omega_rad_fs, double temperature_k,
                  const SellmeierCoefficients& s);

// d k / d omega by adaptive central difference (fs/um). Relative step of the
// probe is delta_omega = rel_step * omega.
double inverse_group_velocity(double omega_rad_fs, double temperature_k,
                              const SellmeierCoefficients& s,
                              double rel_step = 1e-4);

// Quasi-phase-matched momentum mismatch (first grating order):
//   dk = k_p(w_s + w_i) - k_s(w_s) - k_i(w_i) - 2 pi / poling_period.
double delta_k(double omega_s, double omega_i, const CrystalConfig& crystal);

// sinc(dk L/2) exp(i dk L/2) with sinc(0) = 1.
std::complex<double> phase_matching_amplitude(double delta_k_rad_um,
                                              double length_um);

// Phase-matching amplitude at the given signal/idler frequencies.
std::complex<double> phase_matching(double omega_s, double omega_i,
                                    const CrystalConfig& crystal);

struct QpmSolution {
  double lambda_signal_um;
  double lambda_idler_um;
};

// Finds the energy-conserving signal/idler pair with delta_k = 0 by scanning
// the signal band for a sign change and bisecting to |dk| < tol_rad_um.
// Throws NumericalError ("not phase-matchable") when no sign change exists,
// with scanned-band diagnostics in the message.
QpmSolution solve_qpm(double lambda_pump_um, const CrystalConfig& crystal,
                      double band_lo_um = 1.1, double band_hi_um = 2.05,
                      double tol_rad_um = 1e-9);

// 1/v_g(a) - 1/v_g(b) in fs/mm.
double group_velocity_mismatch(double lambda_a_um, double lambda_b_um,
                               const CrystalConfig& crystal);

}  // namespace twinbeam
