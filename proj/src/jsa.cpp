#include "twinbeam/jsa.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "twinbeam/constants.hpp"
#include "twinbeam/errors.hpp"

namespace twinbeam {

namespace {

void check_axis(const Eigen::VectorXd& axis, const char* name) {
  if (axis.size() < 64) {
    std::ostringstream os;
    os << "FrequencyGrid: " << name << " axis needs >= 64 points, got "
       << axis.size();
    throw std::invalid_argument(os.str());
  }
  const double step = axis(1) - axis(0);
  if (!(step > 0.0))
    throw std::invalid_argument(std::string("FrequencyGrid: ") + name +
                                " axis must be strictly increasing");
  for (Eigen::Index i = 1; i < axis.size(); ++i) {
    const double d = axis(i) - axis(i - 1);
    if (!(d > 0.0) || std::abs(d - step) > 1e-9 * step)
      throw std::invalid_argument(std::string("FrequencyGrid: ") + name +
                                  " axis must be uniform and increasing");
  }
}

}  // namespace

void FrequencyGrid::validate() const {
  check_axis(signal, "signal");
  check_axis(idler, "idler");
}

JsaMatrix build_jsa(const CrystalConfig& crystal, const PumpConfig& pump,
                    const FrequencyGrid& grid) {
  grid.validate();
  crystal.validate();
  pump.validate();

  const Eigen::Index ns = grid.signal.size();
  const Eigen::Index ni = grid.idler.size();
  const double temp = crystal.temperature_k;
  const SellmeierCoefficients& sell = crystal.sellmeier;
  const double half_length = 0.5 * crystal.length_um();
  const double grating = 2.0 * kPi / crystal.poling_period_um;
  const double omega_p0 = pump.center_omega();

  Eigen::VectorXd k_signal(ns), k_idler(ni);
  for (Eigen::Index i = 0; i < ns; ++i)
    k_signal(i) = wavenumber(grid.signal(i), temp, sell);
  for (Eigen::Index j = 0; j < ni; ++j)
    k_idler(j) = wavenumber(grid.idler(j), temp, sell);

  JsaMatrix jsa;
  jsa.grid = grid;
  jsa.values.resize(ns, ni);
  for (Eigen::Index i = 0; i < ns; ++i) {
    const double ws = grid.signal(i);
    for (Eigen::Index j = 0; j < ni; ++j) {
      const double wi = grid.idler(j);
      const double dk =
          wavenumber(ws + wi, temp, sell) - k_signal(i) - k_idler(j) - grating;
      jsa.values(i, j) = envelope(ws + wi - omega_p0, pump) *
                         phase_matching_amplitude(dk, 2.0 * half_length);
    }
  }

  const double norm = jsa.values.norm();
  if (!(norm > 0.0))
    throw NumericalError("build_jsa: grid has no phase-matched support");
  jsa.values /= norm;
  return jsa;
}

FrequencyGrid default_grid(const CrystalConfig& crystal, const PumpConfig& pump,
                           int n_points, double span_lobes) {
  if (n_points < 64)
    throw std::invalid_argument("default_grid: n_points must be >= 64");
  if (!(span_lobes >= 2.0))
    throw std::invalid_argument("default_grid: span_lobes must be >= 2");

  const QpmSolution qpm = solve_qpm(pump.center_wavelength_um, crystal);
  const double ws0 = omega_from_wavelength(qpm.lambda_signal_um);
  const double wi0 = omega_from_wavelength(qpm.lambda_idler_um);
  const double wp0 = pump.center_omega();

  const double temp = crystal.temperature_k;
  const SellmeierCoefficients& sell = crystal.sellmeier;
  const double ivg_p = inverse_group_velocity(wp0, temp, sell);
  const double slope_s = ivg_p - inverse_group_velocity(ws0, temp, sell);
  const double slope_i = ivg_p - inverse_group_velocity(wi0, temp, sell);

  const double pump_half = 4.0 * spectral_sigma(pump.tau_fwhm_fs);
  const double lobe_s =
      2.0 * kPi * span_lobes / (crystal.length_um() * std::abs(slope_s));
  const double lobe_i =
      2.0 * kPi * span_lobes / (crystal.length_um() * std::abs(slope_i));
  const double half_s = std::max(lobe_s, pump_half);
  const double half_i = std::max(lobe_i, pump_half);

  FrequencyGrid grid;
  grid.signal = Eigen::VectorXd::LinSpaced(n_points, ws0 - half_s, ws0 + half_s);
  grid.idler = Eigen::VectorXd::LinSpaced(n_points, wi0 - half_i, wi0 + half_i);
  return grid;
}

namespace {

// FWHM of a sampled profile by linear interpolation between the bracketing
// cells on each side of the peak.
double profile_fwhm(const Eigen::VectorXd& y, const Eigen::VectorXd& axis) {
  Eigen::Index peak = 0;
  const double center = 0.5 * static_cast<double>(y.size() - 1);
  for (Eigen::Index i = 1; i < y.size(); ++i) {
    if (y(i) > y(peak) ||
        (y(i) == y(peak) &&
         std::abs(i - center) < std::abs(peak - center)))
      peak = i;
  }
  const double half = 0.5 * y(peak);
  Eigen::Index above = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (y(i) > half) ++above;
  if (above < 3)
    throw NumericalError(
        "width: support narrower than 3 grid cells; refine the grid");

  double left = axis(0);
  bool found_left = false;
  for (Eigen::Index i = peak; i > 0; --i) {
    if (y(i - 1) <= half) {
      left = axis(i - 1) +
             (half - y(i - 1)) / (y(i) - y(i - 1)) * (axis(i) - axis(i - 1));
      found_left = true;
      break;
    }
  }
  double right = axis(axis.size() - 1);
  bool found_right = false;
  for (Eigen::Index i = peak; i + 1 < y.size(); ++i) {
    if (y(i + 1) <= half) {
      right = axis(i) +
              (half - y(i)) / (y(i + 1) - y(i)) * (axis(i + 1) - axis(i));
      found_right = true;
      break;
    }
  }
  if (!found_left || !found_right)
    throw NumericalError("width: half-maximum crossing falls outside the grid");
  return right - left;
}

void argmax_toward_center(const Eigen::MatrixXd& m, Eigen::Index& row,
                          Eigen::Index& col) {
  const double rc = 0.5 * static_cast<double>(m.rows() - 1);
  const double cc = 0.5 * static_cast<double>(m.cols() - 1);
  row = 0;
  col = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (m(i, j) > m(row, col)) {
        row = i;
        col = j;
      } else if (m(i, j) == m(row, col)) {
        const double d_new = std::hypot(i - rc, j - cc);
        const double d_old = std::hypot(row - rc, col - cc);
        if (d_new < d_old) {
          row = i;
          col = j;
        }
      }
    }
}

}  // namespace

double marginal_width(const JsaMatrix& jsa, Axis axis) {
  const Eigen::MatrixXd p = jsa.values.cwiseAbs2();
  if (axis == Axis::Signal)
    return profile_fwhm(p.rowwise().sum(), jsa.grid.signal);
  return profile_fwhm(p.colwise().sum().transpose(), jsa.grid.idler);
}

double conditional_width(const JsaMatrix& jsa, Axis axis) {
  const Eigen::MatrixXd p = jsa.values.cwiseAbs2();
  Eigen::Index row, col;
  argmax_toward_center(p, row, col);
  if (axis == Axis::Signal) return profile_fwhm(p.col(col), jsa.grid.signal);
  return profile_fwhm(p.row(row).transpose(), jsa.grid.idler);
}

double fedorov_ratio(const JsaMatrix& jsa) {
  return marginal_width(jsa, Axis::Signal) / conditional_width(jsa, Axis::Signal);
}

void write_jsa_csv(const JsaMatrix& jsa, std::ostream& os, JsaField field) {
  auto value = [&](const std::complex<double>& z) {
    switch (field) {
      case JsaField::Abs: return std::abs(z);
      case JsaField::Abs2: return std::norm(z);
      case JsaField::Re: return z.real();
      case JsaField::Im: return z.imag();
    }
    return 0.0;
  };
  char buf[32];
  os << "omega_s\\omega_i";
  for (Eigen::Index j = 0; j < jsa.grid.idler.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.12g", jsa.grid.idler(j));
    os << ',' << buf;
  }
  os << '\n';
  for (Eigen::Index i = 0; i < jsa.values.rows(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g", jsa.grid.signal(i));
    os << buf;
    for (Eigen::Index j = 0; j < jsa.values.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.12g", value(jsa.values(i, j)));
      os << ',' << buf;
    }
    os << '\n';
  }
}

}  // namespace twinbeam
