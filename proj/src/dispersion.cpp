#include "twinbeam/dispersion.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "twinbeam/constants.hpp"
#include "twinbeam/errors.hpp"

namespace twinbeam {

SellmeierCoefficients SellmeierCoefficients::mgo_lithium_niobate() {
  SellmeierCoefficients s;
  s.a1 = 5.756;
  s.a2 = 0.0983;
  s.a3 = 0.202;
  s.a4 = 189.32;
  s.a5 = 12.52;
  s.a6 = 0.0132;
  s.b1 = 2.86e-6;
  s.b2 = 4.7e-8;
  s.b3 = 6.113e-8;
  s.b4 = 1.516e-4;
  s.t_room_k = 297.65;  // 24.5 C reference of the fit
  return s;
}

void CrystalConfig::validate() const {
  if (!(poling_period_um > 0.0))
    throw ConfigError("crystal: poling_period_um must be > 0");
  if (!(length_mm > 0.0)) throw ConfigError("crystal: length_mm must be > 0");
  if (!(temperature_k > 0.0))
    throw ConfigError("crystal: temperature_k must be > 0");
}

double refractive_index(double lambda_um, double temperature_k,
                        const SellmeierCoefficients& s) {
  if (!(lambda_um >= kLambdaMinUm && lambda_um <= kLambdaMaxUm)) {
    std::ostringstream os;
    os << "refractive_index: lambda = " << lambda_um
       << " um outside validity window [" << kLambdaMinUm << ", " << kLambdaMaxUm
       << "] um";
    throw std::domain_error(os.str());
  }
  const double f = temperature_k * temperature_k - s.t_room_k * s.t_room_k;
  const double l2 = lambda_um * lambda_um;

  const double pole1 = s.a3 + f * s.b3;
  const double den1 = l2 - pole1 * pole1;
  if (den1 == 0.0)
    throw std::domain_error("refractive_index: lambda^2 hits the UV pole term");
  const double den2 = l2 - s.a5 * s.a5;
  if (den2 == 0.0)
    throw std::domain_error("refractive_index: lambda^2 hits the IR pole term");

  const double n2 = s.a1 + f * s.b1 + (s.a2 + f * s.b2) / den1 +
                    (s.a4 + f * s.b4) / den2 - s.a6 * l2;
  if (!(n2 > 1.0)) {
    std::ostringstream os;
    os << "refractive_index: n^2 = " << n2 << " <= 1 at lambda = " << lambda_um
       << " um (IR pole term " << (s.a4 + f * s.b4) / den2 << " dominates)";
    throw std::domain_error(os.str());
  }
  return std::sqrt(n2);
}

double wavenumber(double omega_rad_fs, double temperature_k,
                  const SellmeierCoefficients& s) {
  if (!(omega_rad_fs > 0.0))
    throw std::domain_error("wavenumber: omega must be > 0");
  const double lambda = wavelength_from_omega(omega_rad_fs);
  return refractive_index(lambda, temperature_k, s) * omega_rad_fs /
         kSpeedOfLightUmPerFs;
}

double inverse_group_velocity(double omega_rad_fs, double temperature_k,
                              const SellmeierCoefficients& s, double rel_step) {
  const double h = rel_step * omega_rad_fs;
  return (wavenumber(omega_rad_fs + h, temperature_k, s) -
          wavenumber(omega_rad_fs - h, temperature_k, s)) /
         (2.0 * h);
}

double delta_k(double omega_s, double omega_i, const CrystalConfig& crystal) {
  if (!(omega_s > 0.0 && omega_i > 0.0))
    throw std::domain_error("delta_k: signal and idler frequencies must be > 0");
  const double t = crystal.temperature_k;
  const SellmeierCoefficients& s = crystal.sellmeier;
  return wavenumber(omega_s + omega_i, t, s) - wavenumber(omega_s, t, s) -
         wavenumber(omega_i, t, s) - 2.0 * kPi / crystal.poling_period_um;
}

std::complex<double> phase_matching_amplitude(double delta_k_rad_um,
                                              double length_um) {
  const double x = 0.5 * delta_k_rad_um * length_um;
  const double sinc = std::abs(x) < 1e-9 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
  return sinc * std::exp(std::complex<double>(0.0, x));
}

std::complex<double> phase_matching(double omega_s, double omega_i,
                                    const CrystalConfig& crystal) {
  return phase_matching_amplitude(delta_k(omega_s, omega_i, crystal),
                                  crystal.length_um());
}

QpmSolution solve_qpm(double lambda_pump_um, const CrystalConfig& crystal,
                      double band_lo_um, double band_hi_um, double tol_rad_um) {
  crystal.validate();
  const double omega_p = omega_from_wavelength(lambda_pump_um);

  // dk as a function of signal frequency under energy conservation.
  // Points where either branch leaves the Sellmeier window are skipped.
  auto mismatch = [&](double omega_s) {
    return delta_k(omega_s, omega_p - omega_s, crystal);
  };

  const int n_scan = 256;
  const double w_hi = omega_from_wavelength(band_lo_um);
  const double w_lo = omega_from_wavelength(band_hi_um);
  double prev_w = 0.0, prev_dk = 0.0;
  bool have_prev = false;
  int n_valid = 0;
  double first_dk = 0.0, last_dk = 0.0;

  for (int i = 0; i <= n_scan; ++i) {
    const double w = w_lo + (w_hi - w_lo) * static_cast<double>(i) / n_scan;
    const double wi = omega_p - w;
    if (wi <= 0.0) continue;
    const double ls = wavelength_from_omega(w);
    const double li = wavelength_from_omega(wi);
    if (ls < kLambdaMinUm || ls > kLambdaMaxUm || li < kLambdaMinUm ||
        li > kLambdaMaxUm)
      continue;
    const double dk = mismatch(w);
    if (n_valid == 0) first_dk = dk;
    last_dk = dk;
    ++n_valid;

    if (have_prev && ((prev_dk < 0.0) != (dk < 0.0) || dk == 0.0)) {
      // Bisect on [prev_w, w] until the interval is exhausted.
      double a = prev_w, b = w, fa = prev_dk;
      for (int iter = 0; iter < 200; ++iter) {
        const double m = 0.5 * (a + b);
        if (m == a || m == b) break;
        const double fm = mismatch(m);
        if (std::abs(fm) < tol_rad_um * 1e-4) {
          a = b = m;
          break;
        }
        if ((fa < 0.0) == (fm < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      const double w_root = 0.5 * (a + b);
      if (std::abs(mismatch(w_root)) > tol_rad_um) continue;  // spurious
      return {wavelength_from_omega(w_root),
              wavelength_from_omega(omega_p - w_root)};
    }
    prev_w = w;
    prev_dk = dk;
    have_prev = true;
  }

  std::ostringstream os;
  os << "solve_qpm: not phase-matchable for lambda_p = " << lambda_pump_um
     << " um on signal band [" << band_lo_um << ", " << band_hi_um << "] um ("
     << n_valid << " valid scan points";
  if (n_valid > 0) os << ", dk from " << first_dk << " to " << last_dk << " rad/um";
  os << ")";
  throw NumericalError(os.str());
}

double group_velocity_mismatch(double lambda_a_um, double lambda_b_um,
                               const CrystalConfig& crystal) {
  const double ivg_a = inverse_group_velocity(
      omega_from_wavelength(lambda_a_um), crystal.temperature_k, crystal.sellmeier);
  const double ivg_b = inverse_group_velocity(
      omega_from_wavelength(lambda_b_um), crystal.temperature_k, crystal.sellmeier);
  return (ivg_a - ivg_b) * 1000.0;  // fs/um -> fs/mm
}

}  // namespace twinbeam
