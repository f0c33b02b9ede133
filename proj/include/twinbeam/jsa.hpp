#pragma once

#include <Eigen/Dense>
#include <iosfwd>

#include "twinbeam/dispersion.hpp"
#include "twinbeam/pump.hpp"

namespace twinbeam {

struct FrequencyGrid {
  Eigen::VectorXd signal;  // rad/fs, strictly increasing
  Eigen::VectorXd idler;

  void validate() const;  // >= 64 points per axis, strictly increasing
  double signal_step() const { return signal(1) - signal(0); }
  double idler_step() const { return idler(1) - idler(0); }
};

// J(w_s, w_i) = alpha(w_s + w_i - w_p0) Phi(w_s, w_i) on the grid,
// Frobenius-normalized. Rows index signal frequency, columns idler.
struct JsaMatrix {
  Eigen::MatrixXcd values;
  FrequencyGrid grid;
};

JsaMatrix build_jsa(const CrystalConfig& crystal, const PumpConfig& pump,
                    const FrequencyGrid& grid);

// Grid centered on the QPM solution. Each half-axis spans `span_lobes` sinc
// lobes of the phase-matching function or 4 sigma_p of pump detuning,
// whichever is wider.
FrequencyGrid default_grid(const CrystalConfig& crystal, const PumpConfig& pump,
                           int n_points = 512, double span_lobes = 3.0);

enum class Axis { Signal, Idler };

// FWHM of the |J|^2 marginal (sum over the other axis), linear interpolation
// between bracketing cells. Throws NumericalError when the support is
// narrower than 3 cells.
double marginal_width(const JsaMatrix& jsa, Axis axis);

// FWHM of the |J|^2 slice through the global maximum (ties broken toward the
// grid center).
double conditional_width(const JsaMatrix& jsa, Axis axis);

// Marginal / conditional width on the signal axis.
double fedorov_ratio(const JsaMatrix& jsa);

// Textual matrix dump: first row idler axis, first column signal axis,
// cells = requested field of J.
enum class JsaField { Abs, Abs2, Re, Im };
void write_jsa_csv(const JsaMatrix& jsa, std::ostream& os,
                   JsaField field = JsaField::Abs);

}  // namespace twinbeam
