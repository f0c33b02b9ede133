#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace twinbeam {

// Tensor product of two-mode squeezed states over the Schmidt pairs.
// mu_n = e^{i phi_n} tanh r_n is the per-pair Fock-ladder ratio.
struct TmssState {
  Eigen::VectorXd squeezing;  // r_n >= 0
  Eigen::VectorXd phases;     // phi_n

  Eigen::VectorXcd mu() const;
  void validate() const;
};

// Local-oscillator projection of a homodyne measurement. Sub-normalized
// overlaps (sum |c|^2 < 1) are allowed; the missing fraction contributes
// vacuum to the detected quadrature.
struct LoProjection {
  Eigen::VectorXcd signal_overlaps;  // c_n
  Eigen::VectorXcd idler_overlaps;   // d_n
  double theta_signal = 0.0;         // LO phases, rad
  double theta_idler = 0.0;

  void validate() const;  // sum |c|^2 <= 1, sum |d|^2 <= 1
};

// Discrete inner products <lo|mode_n> against the columns of `modes`.
// The LO must be unit-norm on the same axis as the modes.
Eigen::VectorXcd overlap_coefficients(const Eigen::VectorXcd& lo_mode,
                                      const Eigen::MatrixXcd& modes);

// Closed form for Var(X_s - X_i):
//   1 + sum_n (|c_n|^2 + |d_n|^2) sinh^2 r_n
//     - 2 Re[ e^{-i(theta_s+theta_i)} sum_n c_n d_n e^{i phi_n} sinh r_n cosh r_n ].
// Quadrature convention X = (a + a^dag)/sqrt(2): single-arm vacuum variance
// 1/2, difference-variance vacuum reference 1.
double difference_quadrature_variance(const TmssState& state,
                                      const LoProjection& proj);

// Independent cross-check: builds the 4M x 4M quadrature covariance matrix
// by symplectic construction, projects onto the LO quadratures, and returns
// the same difference variance.
double covariance_oracle_variance(const TmssState& state,
                                  const LoProjection& proj);

// Idler state conditioned on a total signal photon count N: a diagonal
// mixture over all occupation patterns {k_n} with sum k_n = N, pattern
// weight proportional to prod |mu_n|^{2 k_n}.
struct ConditionedComponent {
  double weight;
  std::vector<int> occupation;
};

struct ConditionedState {
  std::vector<ConditionedComponent> components;  // nonzero weights, normalized
  double purity;                                 // sum of squared weights
};

// Enumeration caps: modes <= 8, N <= 20 (throws ResourceError beyond).
// cutoff bounds the per-mode occupation and must be >= N for an exact result.
ConditionedState condition_idler(const TmssState& state, int photon_count,
                                 int cutoff);

// Joint photon-number sampler with per-pair k_s = k_i enforced (lossless
// twin correlation). Returns arm totals per shot.
struct TwinShots {
  std::vector<double> signal;
  std::vector<double> idler;
};

TwinShots twin_number_correlation(const TmssState& state, int n_shots,
                                  std::uint64_t seed);

}  // namespace twinbeam
