#include "twinbeam/gaussian.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "twinbeam/errors.hpp"
#include "twinbeam/rng.hpp"

namespace twinbeam {

Eigen::VectorXcd TmssState::mu() const {
  Eigen::VectorXcd out(squeezing.size());
  for (Eigen::Index n = 0; n < squeezing.size(); ++n)
    out(n) = std::polar(std::tanh(squeezing(n)), phases(n));
  return out;
}

void TmssState::validate() const {
  if (squeezing.size() != phases.size())
    throw std::invalid_argument("TmssState: squeezing/phase size mismatch");
  if (squeezing.size() == 0)
    throw std::invalid_argument("TmssState: needs at least one mode");
  if ((squeezing.array() < 0.0).any())
    throw std::domain_error("TmssState: squeezing parameters must be >= 0");
}

void LoProjection::validate() const {
  if (signal_overlaps.size() != idler_overlaps.size())
    throw std::invalid_argument("LoProjection: overlap size mismatch");
  const double cs = signal_overlaps.squaredNorm();
  const double ds = idler_overlaps.squaredNorm();
  if (cs > 1.0 + 1e-9 || ds > 1.0 + 1e-9)
    throw std::invalid_argument(
        "LoProjection: overlap norms exceed 1 (LO not normalized?)");
}

Eigen::VectorXcd overlap_coefficients(const Eigen::VectorXcd& lo_mode,
                                      const Eigen::MatrixXcd& modes) {
  if (lo_mode.size() != modes.rows())
    throw std::invalid_argument(
        "overlap_coefficients: LO and modes are on different axes");
  if (std::abs(lo_mode.squaredNorm() - 1.0) > 1e-9)
    throw std::invalid_argument("overlap_coefficients: LO must be unit-norm");
  return modes.transpose() * lo_mode.conjugate();  // c_n = sum_j conj(u_j) phi_n(j)
}

double difference_quadrature_variance(const TmssState& state,
                                      const LoProjection& proj) {
  state.validate();
  proj.validate();
  if (proj.signal_overlaps.size() != state.squeezing.size())
    throw std::invalid_argument(
        "difference_quadrature_variance: projection/state size mismatch");

  double var = 1.0;
  std::complex<double> cross(0.0, 0.0);
  for (Eigen::Index n = 0; n < state.squeezing.size(); ++n) {
    const double r = state.squeezing(n);
    const double sh = std::sinh(r);
    var += (std::norm(proj.signal_overlaps(n)) +
            std::norm(proj.idler_overlaps(n))) *
           sh * sh;
    cross += proj.signal_overlaps(n) * proj.idler_overlaps(n) *
             std::polar(sh * std::cosh(r), state.phases(n));
  }
  const std::complex<double> lo_phase =
      std::polar(1.0, -(proj.theta_signal + proj.theta_idler));
  var -= 2.0 * (lo_phase * cross).real();
  return var;
}

namespace {

// Two-mode squeezing symplectic on (x_a, p_a, x_b, p_b):
//   a -> a cosh r + e^{i phi} b^dag sinh r  (and a <-> b).
Eigen::Matrix4d two_mode_squeeze_symplectic(double r, double phi) {
  const double c = std::cosh(r);
  const double s = std::sinh(r);
  const double cp = std::cos(phi);
  const double sp = std::sin(phi);
  Eigen::Matrix4d m;
  m << c, 0, s * cp, s * sp,
       0, c, s * sp, -s * cp,
       s * cp, s * sp, c, 0,
       s * sp, -s * cp, 0, c;
  return m;
}

}  // namespace

double covariance_oracle_variance(const TmssState& state,
                                  const LoProjection& proj) {
  state.validate();
  proj.validate();
  const Eigen::Index m = state.squeezing.size();
  if (proj.signal_overlaps.size() != m)
    throw std::invalid_argument(
        "covariance_oracle_variance: projection/state size mismatch");

  // Quadrature order: (x_{A_n}, p_{A_n}, x_{B_n}, p_{B_n}) per pair.
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(4 * m, 4 * m);
  for (Eigen::Index n = 0; n < m; ++n) {
    const Eigen::Matrix4d s =
        two_mode_squeeze_symplectic(state.squeezing(n), state.phases(n));
    gamma.block<4, 4>(4 * n, 4 * n) = 0.5 * s * s.transpose();
  }

  // X_s - X_i as a linear form over the quadratures. A rotated quadrature
  // X(theta) = (a e^{-i theta} + h.c.)/sqrt(2) of the effective mode
  // A = sum c_n A_n picks up Re/Im parts of c_n e^{-i theta}.
  Eigen::VectorXd form = Eigen::VectorXd::Zero(4 * m);
  for (Eigen::Index n = 0; n < m; ++n) {
    const std::complex<double> cs =
        proj.signal_overlaps(n) * std::polar(1.0, -proj.theta_signal);
    const std::complex<double> di =
        proj.idler_overlaps(n) * std::polar(1.0, -proj.theta_idler);
    form(4 * n + 0) = cs.real();
    form(4 * n + 1) = -cs.imag();
    form(4 * n + 2) = -di.real();
    form(4 * n + 3) = di.imag();
  }

  // Sub-normalized projections leave a vacuum remainder in each arm.
  const double vac_s = 1.0 - proj.signal_overlaps.squaredNorm();
  const double vac_i = 1.0 - proj.idler_overlaps.squaredNorm();
  return form.dot(gamma * form) + 0.5 * vac_s + 0.5 * vac_i;
}

ConditionedState condition_idler(const TmssState& state, int photon_count,
                                 int cutoff) {
  state.validate();
  const Eigen::Index m = state.squeezing.size();
  if (photon_count < 0)
    throw std::invalid_argument("condition_idler: photon count must be >= 0");
  if (cutoff < photon_count)
    throw std::invalid_argument("condition_idler: cutoff must be >= N");
  if (m > 8 || photon_count > 20) {
    std::ostringstream os;
    os << "condition_idler: enumeration over " << m << " modes at N = "
       << photon_count << " exceeds the caps (modes <= 8, N <= 20)";
    throw ResourceError(os.str());
  }

  const Eigen::VectorXcd mu = state.mu();
  Eigen::VectorXd log_mu2(m);
  for (Eigen::Index n = 0; n < m; ++n)
    log_mu2(n) = std::norm(mu(n)) > 0.0 ? std::log(std::norm(mu(n))) : 0.0;

  ConditionedState out;
  std::vector<int> pattern(static_cast<std::size_t>(m), 0);
  double total = 0.0;

  // Depth-first enumeration of {k_n >= 0 : sum k_n = N, k_n <= cutoff}.
  auto enumerate = [&](auto&& self, Eigen::Index mode, int remaining) -> void {
    if (mode == m - 1) {
      if (remaining > cutoff) return;
      pattern[static_cast<std::size_t>(mode)] = remaining;
      double log_w = 0.0;
      bool zero = false;
      for (Eigen::Index n = 0; n < m; ++n) {
        const int k = pattern[static_cast<std::size_t>(n)];
        if (k == 0) continue;
        if (std::norm(mu(n)) == 0.0) {
          zero = true;
          break;
        }
        log_w += k * log_mu2(n);
      }
      if (!zero) {
        const double w = std::exp(log_w);
        out.components.push_back({w, pattern});
        total += w;
      }
      return;
    }
    const int top = std::min(remaining, cutoff);
    for (int k = 0; k <= top; ++k) {
      pattern[static_cast<std::size_t>(mode)] = k;
      self(self, mode + 1, remaining - k);
    }
  };
  enumerate(enumerate, 0, photon_count);

  if (!(total > 0.0))
    throw NumericalError(
        "condition_idler: conditioning on N > 0 photons from vacuum modes");
  double purity = 0.0;
  for (auto& c : out.components) {
    c.weight /= total;
    purity += c.weight * c.weight;
  }
  out.purity = purity;
  return out;
}

TwinShots twin_number_correlation(const TmssState& state, int n_shots,
                                  std::uint64_t seed) {
  state.validate();
  if (n_shots < 1)
    throw std::invalid_argument("twin_number_correlation: n_shots must be >= 1");
  TwinShots out;
  out.signal.resize(static_cast<std::size_t>(n_shots));
  out.idler.resize(static_cast<std::size_t>(n_shots));
  for (int s = 0; s < n_shots; ++s) {
    SubstreamRng rng(seed, static_cast<std::uint64_t>(s));
    double total = 0.0;
    for (Eigen::Index n = 0; n < state.squeezing.size(); ++n) {
      const double sh = std::sinh(state.squeezing(n));
      total += static_cast<double>(rng.geometric_photons(sh * sh));
    }
    // k_s,n = k_i,n per pair, so the arm totals coincide shot by shot.
    out.signal[static_cast<std::size_t>(s)] = total;
    out.idler[static_cast<std::size_t>(s)] = total;
  }
  return out;
}

}  // namespace twinbeam
