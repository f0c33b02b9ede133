#include "twinbeam/analysis.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "twinbeam/errors.hpp"
#include "twinbeam/rng.hpp"

namespace twinbeam {

SpectraEnsemble simulate_shot_spectra(const Eigen::MatrixXcd& modes,
                                      const Eigen::VectorXd& populations,
                                      int n_shots, std::uint64_t seed,
                                      double noise_std,
                                      const Eigen::VectorXd& axis) {
  const Eigen::Index n_bins = modes.rows();
  const Eigen::Index n_modes = modes.cols();
  if (n_modes == 0 || n_bins == 0)
    throw std::invalid_argument("simulate_shot_spectra: empty mode matrix");
  if (populations.size() != n_modes)
    throw std::invalid_argument(
        "simulate_shot_spectra: populations/modes size mismatch");
  if ((populations.array() < 0.0).any())
    throw std::domain_error("simulate_shot_spectra: negative population");
  if (n_shots < 1)
    throw std::invalid_argument("simulate_shot_spectra: n_shots must be >= 1");
  if (axis.size() != 0 && axis.size() != n_bins)
    throw std::invalid_argument("simulate_shot_spectra: axis/modes size mismatch");

  SpectraEnsemble out;
  out.seed = seed;
  out.axis = axis.size() == n_bins
                 ? axis
                 : Eigen::VectorXd::LinSpaced(n_bins, 0.0,
                                              static_cast<double>(n_bins - 1));
  out.intensities.resize(n_shots, n_bins);

  Eigen::VectorXd amp_scale = (populations / 2.0).cwiseSqrt();
  Eigen::VectorXcd a(n_modes);
  Eigen::VectorXcd field(n_bins);
  for (int s = 0; s < n_shots; ++s) {
    SubstreamRng rng(seed, static_cast<std::uint64_t>(s));
    for (Eigen::Index n = 0; n < n_modes; ++n) {
      const double re = rng.normal();
      const double im = rng.normal();
      a(n) = amp_scale(n) * std::complex<double>(re, im);
    }
    field.noalias() = modes * a;
    for (Eigen::Index j = 0; j < n_bins; ++j) {
      double intensity = std::norm(field(j));
      if (noise_std > 0.0) intensity += noise_std * rng.normal();
      out.intensities(s, j) = intensity;
    }
  }
  return out;
}

G1Estimate g1_from_covariance(const SpectraEnsemble& ensemble) {
  const Eigen::Index shots = ensemble.intensities.rows();
  const Eigen::Index bins = ensemble.intensities.cols();
  if (shots < 2)
    throw std::invalid_argument("g1_from_covariance: needs >= 2 shots");
  if (bins < 2)
    throw std::invalid_argument("g1_from_covariance: needs >= 2 bins");

  G1Estimate out;
  if (shots < 10 * bins) {
    std::ostringstream os;
    os << "covariance estimate is ill-conditioned: " << shots << " shots for "
       << bins << " bins (want >= " << 10 * bins << ")";
    out.warning = os.str();
  }

  const Eigen::RowVectorXd mean = ensemble.intensities.colwise().mean();
  const Eigen::MatrixXd centered = ensemble.intensities.rowwise() - mean;
  Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(shots - 1);

  // Gaussian moment factorization: Cov = |G1|^2 element-wise.
  out.magnitude = cov.cwiseMax(0.0).cwiseSqrt();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.magnitude,
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("g1_from_covariance: eigensolver did not converge");
  out.eigenvalues_raw = es.eigenvalues().reverse();
  out.eigenvalues = out.eigenvalues_raw.cwiseMax(0.0);

  const double total = out.eigenvalues.sum();
  if (!(total > 0.0))
    throw NumericalError(
        "g1_from_covariance: degenerate covariance (zero-variance input)");
  const double s2 = (out.eigenvalues / total).array().square().sum();
  out.schmidt_number = 1.0 / s2;
  return out;
}

BootstrapResult bootstrap_k(const SpectraEnsemble& ensemble, int n_subsets) {
  if (n_subsets < 2)
    throw std::invalid_argument("bootstrap_k: needs >= 2 subsets");
  const Eigen::Index shots = ensemble.intensities.rows();
  const Eigen::Index bins = ensemble.intensities.cols();
  const Eigen::Index per = shots / n_subsets;
  if (per < 2)
    throw std::invalid_argument("bootstrap_k: subsets would hold < 2 shots");

  BootstrapResult out;
  out.subsets_used = n_subsets;
  if (per < bins) {
    std::ostringstream os;
    os << "bootstrap subsets hold " << per << " shots for " << bins
       << " bins; per-subset estimates are ill-conditioned";
    out.warning = os.str();
  }

  std::vector<double> ks;
  ks.reserve(static_cast<std::size_t>(n_subsets));
  SpectraEnsemble subset;
  subset.axis = ensemble.axis;
  subset.seed = ensemble.seed;
  for (int b = 0; b < n_subsets; ++b) {
    subset.intensities = ensemble.intensities.middleRows(b * per, per);
    ks.push_back(g1_from_covariance(subset).schmidt_number);
  }
  double mean = 0.0;
  for (const double k : ks) mean += k;
  mean /= static_cast<double>(ks.size());
  double var = 0.0;
  for (const double k : ks) var += (k - mean) * (k - mean);
  var /= static_cast<double>(ks.size() - 1);
  out.k_mean = mean;
  out.k_std = std::sqrt(var);
  return out;
}

SpectraEnsemble read_spectra_csv(std::istream& is) {
  std::string line;
  std::vector<double> axis;
  std::vector<std::vector<double>> rows;
  bool have_axis = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> fields;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        fields.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError("spectra CSV: non-numeric cell '" + cell + "'");
      }
    }
    if (fields.empty()) continue;
    if (!have_axis) {
      axis = fields;
      have_axis = true;
      continue;
    }
    if (fields.size() != axis.size())
      throw ConfigError("spectra CSV: row length does not match header");
    rows.push_back(std::move(fields));
  }
  if (!have_axis || rows.empty())
    throw ConfigError("spectra CSV: need a header row and at least one shot");

  SpectraEnsemble out;
  out.axis = Eigen::Map<Eigen::VectorXd>(axis.data(),
                                         static_cast<Eigen::Index>(axis.size()));
  out.intensities.resize(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(axis.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < axis.size(); ++c)
      out.intensities(static_cast<Eigen::Index>(r),
                      static_cast<Eigen::Index>(c)) = rows[r][c];
  return out;
}

void write_spectra_csv(const SpectraEnsemble& ensemble, std::ostream& os) {
  char buf[32];
  for (Eigen::Index j = 0; j < ensemble.axis.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.12g", ensemble.axis(j));
    os << (j ? "," : "") << buf;
  }
  os << '\n';
  for (Eigen::Index s = 0; s < ensemble.intensities.rows(); ++s) {
    for (Eigen::Index j = 0; j < ensemble.intensities.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.12g", ensemble.intensities(s, j));
      os << (j ? "," : "") << buf;
    }
    os << '\n';
  }
}

}  // namespace twinbeam
