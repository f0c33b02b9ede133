#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "twinbeam/constants.hpp"
#include "twinbeam/dispersion.hpp"
#include "twinbeam/errors.hpp"

using namespace twinbeam;

namespace {

// Term-by-term Sellmeier evaluation, written independently of the library
// path so it can serve as the arithmetic oracle.
double sellmeier_oracle(double lambda_um, double temperature_k) {
  const double a1 = 5.756, a2 = 0.0983, a3 = 0.202, a4 = 189.32, a5 = 12.52,
               a6 = 0.0132;
  const double b1 = 2.86e-6, b2 = 4.7e-8, b3 = 6.113e-8, b4 = 1.516e-4;
  const double t_room = 297.65;
  const double f = temperature_k * temperature_k - t_room * t_room;
  const double l2 = lambda_um * lambda_um;
  const double term1 = a1 + f * b1;
  const double term2 = (a2 + f * b2) / (l2 - (a3 + f * b3) * (a3 + f * b3));
  const double term3 = (a4 + f * b4) / (l2 - a5 * a5);
  const double term4 = -a6 * l2;
  return std::sqrt(term1 + term2 + term3 + term4);
}

const SellmeierCoefficients kSet = SellmeierCoefficients::mgo_lithium_niobate();
const double kTRoom = kSet.t_room_k;

}  // namespace

TEST_SUITE("dispersion") {

TEST_CASE("refractive index matches the term-by-term oracle at 1.026 um") {
  const double n = refractive_index(1.026, kTRoom, kSet);
  CHECK(n == doctest::Approx(sellmeier_oracle(1.026, kTRoom)).epsilon(1e-12));
  CHECK(std::abs(n - 2.1502) < 5e-4);
  // a different temperature for good measure
  CHECK(refractive_index(1.37, 373.15, kSet) ==
        doctest::Approx(sellmeier_oracle(1.37, 373.15)).epsilon(1e-12));
}

TEST_CASE("b-terms vanish at room temperature") {
  SellmeierCoefficients no_b = kSet;
  no_b.b1 = no_b.b2 = no_b.b3 = no_b.b4 = 0.0;
  for (const double lam : {0.9, 1.37, 2.5, 4.0})
    CHECK(refractive_index(lam, kTRoom, kSet) ==
          refractive_index(lam, kTRoom, no_b));
}

TEST_CASE("n(lambda) strictly decreasing on [1.0, 2.0] um") {
  double prev = refractive_index(1.0, kTRoom, kSet);
  for (int i = 1; i < 100; ++i) {
    const double lam = 1.0 + i * 0.01;
    const double n = refractive_index(lam, kTRoom, kSet);
    CHECK(n < prev);
    prev = n;
  }
}

TEST_CASE("n^2 > 1 over the stated band") {
  for (int i = 0; i <= 72; ++i) {
    const double lam = 0.9 + i * 0.05;
    CHECK(refractive_index(lam, kTRoom, kSet) > 1.0);
  }
}

TEST_CASE("out-of-window wavelengths are domain errors") {
  CHECK_THROWS_AS(refractive_index(0.2, kTRoom, kSet), std::domain_error);
  CHECK_THROWS_AS(refractive_index(6.0, kTRoom, kSet), std::domain_error);
}

TEST_CASE("negative n^2 is reported with the offending term") {
  SellmeierCoefficients bad = kSet;
  bad.a4 = 5000.0;  // IR pole term swamps everything above ~3 um
  try {
    refractive_index(4.0, kTRoom, bad);
    FAIL("expected a domain error");
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("IR pole") != std::string::npos);
  }
}

TEST_CASE("wavenumber at 1.026 um") {
  const double w = omega_from_wavelength(1.026);
  const double k = wavenumber(w, kTRoom, kSet);
  // 2 pi n / lambda with n from the oracle
  CHECK(k == doctest::Approx(2.0 * kPi * sellmeier_oracle(1.026, kTRoom) / 1.026)
                 .epsilon(1e-12));
  CHECK(std::abs(k - 13.167) < 2e-3);
}

TEST_CASE("k doubles with omega when the index is constant") {
  SellmeierCoefficients flat{};
  flat.a1 = 4.0;  // n = 2 everywhere
  flat.a2 = flat.a3 = flat.a4 = 0.0;
  flat.a5 = 12.52;
  flat.a6 = 0.0;
  flat.b1 = flat.b2 = flat.b3 = flat.b4 = 0.0;
  flat.t_room_k = kTRoom;
  const double w = omega_from_wavelength(2.5);
  CHECK(wavenumber(2.0 * w, kTRoom, flat) ==
        doctest::Approx(2.0 * wavenumber(w, kTRoom, flat)).epsilon(1e-14));
}

TEST_CASE("k strictly increasing in omega") {
  const double w_lo = omega_from_wavelength(5.4);
  const double w_hi = omega_from_wavelength(0.35);
  double prev = wavenumber(w_lo, kTRoom, kSet);
  for (int i = 1; i <= 200; ++i) {
    const double w = w_lo + (w_hi - w_lo) * i / 200.0;
    const double k = wavenumber(w, kTRoom, kSet);
    CHECK(k > prev);
    prev = k;
  }
}

TEST_CASE("delta_k reduces to the unpoled mismatch as the poling period grows") {
  CrystalConfig crystal;
  const double ws = omega_from_wavelength(1.37);
  const double wi = omega_from_wavelength(4.0);
  CrystalConfig unpoled = crystal;
  unpoled.poling_period_um = 1e18;
  const double grating = 2.0 * kPi / crystal.poling_period_um;
  CHECK(delta_k(ws, wi, unpoled) ==
        doctest::Approx(delta_k(ws, wi, crystal) + grating).epsilon(1e-12));
}

TEST_CASE("delta_k symmetric under signal-idler exchange (single branch)") {
  CrystalConfig crystal;
  const double ws = omega_from_wavelength(1.41);
  const double wi = omega_from_wavelength(3.9);
  CHECK(std::abs(delta_k(ws, wi, crystal) - delta_k(wi, ws, crystal)) < 1e-12);
}

TEST_CASE("delta_k central differences converge at second order") {
  CrystalConfig crystal;
  const double ws = omega_from_wavelength(1.37);
  const double wi = omega_from_wavelength(4.0);
  auto deriv = [&](double h) {
    return (delta_k(ws + h, wi, crystal) - delta_k(ws - h, wi, crystal)) /
           (2.0 * h);
  };
  const double d1 = deriv(1e-3);
  const double d2 = deriv(5e-4);
  const double d3 = deriv(2.5e-4);
  // Richardson: the error ratio approaches 4 for an O(h^2) scheme.
  const double ratio = (d1 - d3) / (d2 - d3);
  CHECK(ratio > 3.0);
  CHECK(ratio < 6.0);
}

TEST_CASE("phase matching at the QPM point is unity") {
  CrystalConfig crystal;
  const QpmSolution sol = solve_qpm(1.026, crystal);
  const double ws = omega_from_wavelength(sol.lambda_signal_um);
  const double wi = omega_from_wavelength(sol.lambda_idler_um);
  const std::complex<double> phi = phase_matching(ws, wi, crystal);
  CHECK(std::abs(phi - 1.0) < 1e-6);
}

TEST_CASE("phase matching zeros and FWHM point") {
  // Direct amplitude checks at prescribed dk L/2.
  const double length_um = 2000.0;
  auto at = [&](double x) {
    return phase_matching_amplitude(2.0 * x / length_um, length_um);
  };
  CHECK(std::abs(at(0.0) - 1.0) == 0.0);
  CHECK(std::abs(at(kPi)) < 1e-15);
  // |Phi|^2 = 1/2 at the root of sinc^2(x) = 1/2 (located independently by
  // bisection on sin^2(x)/x^2 - 1/2).
  double lo = 1.0, hi = 2.0;
  for (int i = 0; i < 80; ++i) {
    const double m = 0.5 * (lo + hi);
    const double v = std::sin(m) * std::sin(m) / (m * m) - 0.5;
    (v > 0.0 ? lo : hi) = m;
  }
  const double half_point = 0.5 * (lo + hi);
  CHECK(half_point == doctest::Approx(1.39155737825).epsilon(1e-9));
  CHECK(std::norm(at(half_point)) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("solve_qpm reproduces the independently computed root") {
  CrystalConfig crystal;  // T = 373.15 K default
  const QpmSolution sol = solve_qpm(1.026, crystal);
  // Frozen from a high-precision scan + Brent solve of the same Sellmeier set.
  CHECK(sol.lambda_signal_um == doctest::Approx(1.3750610800).epsilon(1e-8));
  CHECK(sol.lambda_idler_um == doctest::Approx(4.0417358132).epsilon(1e-8));

  CrystalConfig cold = crystal;
  cold.temperature_k = 293.15;
  const QpmSolution sol_cold = solve_qpm(1.026, cold);
  CHECK(sol_cold.lambda_signal_um == doctest::Approx(1.3640213642).epsilon(1e-8));
  CHECK(sol_cold.lambda_idler_um == doctest::Approx(4.1402291924).epsilon(1e-8));
}

TEST_CASE("solve_qpm satisfies energy conservation and dk -> 0") {
  CrystalConfig crystal;
  const QpmSolution sol = solve_qpm(1.026, crystal);
  CHECK(1.0 / sol.lambda_idler_um ==
        doctest::Approx(1.0 / 1.026 - 1.0 / sol.lambda_signal_um).epsilon(1e-12));
  const double ws = omega_from_wavelength(sol.lambda_signal_um);
  const double wi = omega_from_wavelength(sol.lambda_idler_um);
  CHECK(std::abs(delta_k(ws, wi, crystal)) < 1e-9);
}

TEST_CASE("energy conservation arithmetic: 1.37 um signal pairs with 4.086 um") {
  const double inv = 1.0 / 1.026 - 1.0 / 1.37;
  CHECK(1.0 / inv == doctest::Approx(4.08610465).epsilon(1e-6));
}

TEST_CASE("solve_qpm invariant under tolerance refinement") {
  CrystalConfig crystal;
  const QpmSolution a = solve_qpm(1.026, crystal, 1.1, 2.05, 1e-9);
  const QpmSolution b = solve_qpm(1.026, crystal, 1.1, 2.05, 1e-13);
  CHECK(std::abs(a.lambda_signal_um - b.lambda_signal_um) < 1e-9);
}

TEST_CASE("solve_qpm reports non-phase-matchable bands with diagnostics") {
  CrystalConfig crystal;
  crystal.poling_period_um = 5.0;  // grating far too large
  try {
    solve_qpm(1.026, crystal);
    FAIL("expected a numerical error");
  } catch (const NumericalError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("not phase-matchable") != std::string::npos);
    CHECK(msg.find("scan") != std::string::npos);
  }
}

TEST_CASE("group velocity mismatch vanishes for identical wavelengths") {
  CrystalConfig crystal;
  CHECK(group_velocity_mismatch(1.37, 1.37, crystal) == 0.0);
}

TEST_CASE("pump-signal and pump-idler GVM have opposite signs") {
  CrystalConfig crystal;
  const double lambda_i = 1.0 / (1.0 / 1.026 - 1.0 / 1.37);
  const double gvm_ps = group_velocity_mismatch(1.026, 1.37, crystal);
  const double gvm_pi = group_velocity_mismatch(1.026, lambda_i, crystal);
  CHECK(gvm_ps * gvm_pi < 0.0);
  // magnitudes frozen from the prototype evaluation
  CHECK(gvm_ps == doctest::Approx(92.94).epsilon(2e-3));
  CHECK(gvm_pi == doctest::Approx(-94.60).epsilon(2e-3));
}

TEST_CASE("finite-difference group slope converges as step^2") {
  CrystalConfig crystal;
  const double w = omega_from_wavelength(1.37);
  const double ref =
      inverse_group_velocity(w, crystal.temperature_k, crystal.sellmeier, 1e-6);
  const double e1 = std::abs(
      inverse_group_velocity(w, crystal.temperature_k, crystal.sellmeier, 8e-3) -
      ref);
  const double e2 = std::abs(
      inverse_group_velocity(w, crystal.temperature_k, crystal.sellmeier, 4e-3) -
      ref);
  CHECK(e1 / e2 > 3.0);
  CHECK(e1 / e2 < 5.0);
}

TEST_CASE("crystal config validation") {
  CrystalConfig crystal;
  crystal.length_mm = 0.0;
  CHECK_THROWS_AS(crystal.validate(), ConfigError);
}

}  // TEST_SUITE
