#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace twinbeam {

// Shot-by-shot intensity spectra of one arm.
struct SpectraEnsemble {
  Eigen::MatrixXd intensities;  // n_shots x n_bins, nonnegative
  Eigen::VectorXd axis;         // frequency axis, n_bins
  std::uint64_t seed = 0;
};

// Thermal-field simulator: shot s draws complex circular-Gaussian mode
// amplitudes a_n with <|a_n|^2> = N_n and records I(w_j) = |sum a_n phi_n|^2.
// Optional additive white noise on I (std per bin) for estimator-robustness
// studies. Deterministic per seed (per-shot substreams).
// `axis` labels the bins (defaults to bin indices when empty).
SpectraEnsemble simulate_shot_spectra(const Eigen::MatrixXcd& modes,
                                      const Eigen::VectorXd& populations,
                                      int n_shots, std::uint64_t seed,
                                      double noise_std = 0.0,
                                      const Eigen::VectorXd& axis = {});

// |G1| and mode count from the spectral intensity covariance. For Gaussian
// fields Cov(I, I') = |G1|^2, so the element-wise square root of the clipped
// covariance estimates |G1|; the element-wise root loses sign information
// when modes overlap with sign-changing G1, which biases K (see README).
struct G1Estimate {
  Eigen::MatrixXd magnitude;        // symmetric |G1| estimate
  Eigen::VectorXd eigenvalues_raw;  // descending, may contain negatives
  Eigen::VectorXd eigenvalues;      // clipped at zero
  double schmidt_number = 0.0;      // 1 / sum (sigma_n / sum sigma)^2
  std::string warning;              // empty when well-conditioned
};

G1Estimate g1_from_covariance(const SpectraEnsemble& ensemble);

// Partitions shots into disjoint subsets, estimates K per subset.
struct BootstrapResult {
  double k_mean = 0.0;
  double k_std = 0.0;
  int subsets_used = 0;
  std::string warning;
};

BootstrapResult bootstrap_k(const SpectraEnsemble& ensemble, int n_subsets = 60);

// CSV ingestion (one shot per row, header row = frequency axis).
SpectraEnsemble read_spectra_csv(std::istream& is);
void write_spectra_csv(const SpectraEnsemble& ensemble, std::ostream& os);

}  // namespace twinbeam
