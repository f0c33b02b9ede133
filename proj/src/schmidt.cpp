#include "twinbeam/schmidt.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "twinbeam/constants.hpp"
#include "twinbeam/errors.hpp"

namespace twinbeam {

namespace {
constexpr double kEigenvalueTruncation = 1e-12;  // relative to lambda_1

// sinh^2 overflows past r ~ 354; populations are ratios so there is no
// rescue once individual terms are inf.
constexpr double kMaxSqueezing = 350.0;
}  // namespace

SchmidtSpectrum decompose(const JsaMatrix& jsa) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(jsa.values,
                                      Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success)
    throw NumericalError("decompose: SVD did not converge");

  const Eigen::VectorXd& sv = svd.singularValues();
  SchmidtSpectrum out;
  out.eigenvalues = sv.array().square();
  const double total = out.eigenvalues.sum();
  if (!(total > 0.0)) throw NumericalError("decompose: zero-norm JSA");
  out.eigenvalues /= total;

  out.signal_modes = svd.matrixU();
  // J = U S V^H, so the idler modes are the conjugated columns of V.
  out.idler_modes = svd.matrixV().conjugate();

  // Deterministic phase convention per mode pair.
  for (Eigen::Index n = 0; n < out.signal_modes.cols(); ++n) {
    Eigen::Index imax = 0;
    out.signal_modes.col(n).cwiseAbs().maxCoeff(&imax);
    const std::complex<double> lead = out.signal_modes(imax, n);
    if (std::abs(lead) > 0.0) {
      const std::complex<double> phase = lead / std::abs(lead);
      out.signal_modes.col(n) *= std::conj(phase);
      out.idler_modes.col(n) *= phase;
    }
  }
  return out;
}

Eigen::VectorXd schmidt_eigenvalues(const JsaMatrix& jsa) {
  const Eigen::Index ns = jsa.values.rows();
  const Eigen::Index ni = jsa.values.cols();
  Eigen::MatrixXcd gram;
  if (ns <= ni)
    gram.noalias() = jsa.values * jsa.values.adjoint();
  else
    gram.noalias() = jsa.values.adjoint() * jsa.values;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram,
                                                     Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("schmidt_eigenvalues: eigensolver did not converge");

  Eigen::VectorXd lam = es.eigenvalues().reverse();  // descending
  lam = lam.cwiseMax(0.0);                           // clip solver noise
  const double total = lam.sum();
  if (!(total > 0.0)) throw NumericalError("schmidt_eigenvalues: zero-norm JSA");
  return lam / total;
}

double schmidt_number(const Eigen::VectorXd& eigenvalues) {
  if (eigenvalues.size() == 0)
    throw std::invalid_argument("schmidt_number: empty spectrum");
  const double s2 = eigenvalues.array().square().sum();
  if (!(s2 > 0.0)) throw NumericalError("schmidt_number: all-zero spectrum");
  return 1.0 / s2;
}

HighGainPopulation high_gain_populations(const Eigen::VectorXd& eigenvalues,
                                         double gain) {
  if (eigenvalues.size() == 0)
    throw std::invalid_argument("high_gain_populations: empty spectrum");
  if (!(gain >= 0.0))
    throw std::domain_error("high_gain_populations: gain must be >= 0");

  const double lead = eigenvalues(0);
  Eigen::Index kept = 0;
  for (Eigen::Index n = 0; n < eigenvalues.size(); ++n) {
    if (eigenvalues(n) < 0.0)
      throw std::domain_error("high_gain_populations: negative eigenvalue");
    if (eigenvalues(n) >= kEigenvalueTruncation * lead) ++kept;
  }
  if (kept == 0)
    throw NumericalError("high_gain_populations: spectrum truncated to nothing");

  HighGainPopulation pop;
  pop.gain = gain;
  pop.squeezing.resize(kept);
  pop.photons.resize(kept);
  Eigen::Index m = 0;
  for (Eigen::Index n = 0; n < eigenvalues.size(); ++n) {
    if (eigenvalues(n) < kEigenvalueTruncation * lead) continue;
    const double r = gain * std::sqrt(eigenvalues(n));
    if (r > kMaxSqueezing)
      throw std::domain_error(
          "high_gain_populations: squeezing parameter overflows sinh^2");
    const double sh = std::sinh(r);
    pop.squeezing(m) = r;
    pop.photons(m) = sh * sh;
    ++m;
  }
  const double total = pop.photons.sum();
  if (!(total > 0.0))
    throw NumericalError("high_gain_populations: zero-gain populations");
  pop.weights = pop.photons / total;
  return pop;
}

double k_high_gain(const HighGainPopulation& pop) {
  const double s2 = pop.weights.array().square().sum();
  return 1.0 / s2;
}

TimeProfile mode_time_profile(const Eigen::VectorXcd& mode,
                              const Eigen::VectorXd& axis) {
  const Eigen::Index n = axis.size();
  if (n < 2 || mode.size() != n)
    throw std::invalid_argument("mode_time_profile: mode/axis size mismatch");
  const double dw = axis(1) - axis(0);
  if (!(dw > 0.0))
    throw std::invalid_argument("mode_time_profile: axis must be increasing");
  for (Eigen::Index i = 1; i < n; ++i) {
    const double d = axis(i) - axis(i - 1);
    if (std::abs(d - dw) > 1e-9 * dw)
      throw std::invalid_argument("mode_time_profile: axis must be uniform");
  }

  // Centered time samples; (1/sqrt(N)) sum_k m_k e^{-i w_k t_j} is unitary
  // on a uniform grid, so Parseval holds exactly.
  const double dt = 2.0 * kPi / (dw * static_cast<double>(n));
  TimeProfile out;
  out.time_fs.resize(n);
  out.amplitude.resize(n);
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    const double t = (static_cast<double>(j) - 0.5 * static_cast<double>(n - 1)) * dt;
    std::complex<double> acc(0.0, 0.0);
    for (Eigen::Index k = 0; k < n; ++k)
      acc += mode(k) * std::exp(std::complex<double>(0.0, -axis(k) * t));
    out.time_fs(j) = t;
    out.amplitude(j) = acc * inv_sqrt_n;
  }
  return out;
}

}  // namespace twinbeam
