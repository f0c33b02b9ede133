#pragma once

#include <Eigen/Dense>

#include "twinbeam/jsa.hpp"

namespace twinbeam {

// Schmidt decomposition J = sum_n sqrt(lambda_n) phi_n(w_s) psi_n(w_i).
// eigenvalues are descending and sum to 1; mode columns are orthonormal in
// the discrete (Euclidean) inner product. Per-mode phases are fixed so that
// the largest-magnitude component of each signal mode is real positive, with
// the compensating phase on the idler mode, keeping the product invariant.
struct SchmidtSpectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd signal_modes;  // N_s x M columns phi_n
  Eigen::MatrixXcd idler_modes;   // N_i x M columns psi_n
};

// Full SVD route. Throws NumericalError if the SVD does not converge.
SchmidtSpectrum decompose(const JsaMatrix& jsa);

// Values-only fast path via the Gram-matrix eigenproblem; same eigenvalues
// as decompose() to solver precision.
Eigen::VectorXd schmidt_eigenvalues(const JsaMatrix& jsa);

// K = 1 / sum lambda_n^2.
double schmidt_number(const Eigen::VectorXd& eigenvalues);

// Gain-dependent mode populations: r_n = G sqrt(lambda_n) (proportionality
// constant fixed to 1, so a single mode at gain G holds sinh^2 G photons),
// N_n = sinh^2 r_n, pi_n = N_n / sum N_m. Eigenvalues below 1e-12 of the
// leading one are dropped first. The mode functions themselves never enter:
// under the bilinear model only the populations evolve with gain, so the
// decomposition stays valid at any G.
struct HighGainPopulation {
  double gain = 0.0;
  Eigen::VectorXd squeezing;  // r_n
  Eigen::VectorXd photons;    // N_n
  Eigen::VectorXd weights;    // pi_n, sum 1
};

HighGainPopulation high_gain_populations(const Eigen::VectorXd& eigenvalues,
                                         double gain);

// K_HG = 1 / sum pi_n^2.
double k_high_gain(const HighGainPopulation& pop);

// Unitary DFT of a spectral mode to the time domain (kernel e^{-i w t}).
// The axis spacing fixes the time window; L2 norm is preserved.
struct TimeProfile {
  Eigen::VectorXd time_fs;
  Eigen::VectorXcd amplitude;
};

TimeProfile mode_time_profile(const Eigen::VectorXcd& mode,
                              const Eigen::VectorXd& axis);

}  // namespace twinbeam
