#pragma once

#include <Eigen/Dense>

#include "twinbeam/schmidt.hpp"

namespace twinbeam {

// Linear-entropy accounting of the reduced single-arm state.
// total = occupational + modal holds exactly by construction; classical is
// h_lin = 1 - sum pi_n^2, carried separately so the sectorial identification
// (modal ~ classical in the bright regime) can be checked rather than assumed.
struct EntropyReport {
  double total = 0.0;
  double occupational = 0.0;
  double modal = 0.0;
  double classical = 0.0;
  Eigen::VectorXd per_mode;  // s_n = 2 N_n / (2 N_n + 1)
};

// s = 2N / (2N + 1); vacuum 0, bright limit 1.
double mode_linear_entropy(double mean_photons);

// sum_n pi_n^2 s_n (pi^2 weights: linear entropy is a Tsallis-2 form).
double occupational_entropy(const HighGainPopulation& pop);

// 1 - prod_n 1/(2 N_n + 1), evaluated in log space.
double total_entropy(const Eigen::VectorXd& photons);

// total - occupational.
double modal_entropy(const HighGainPopulation& pop);

EntropyReport entropy_report(const HighGainPopulation& pop);

}  // namespace twinbeam
