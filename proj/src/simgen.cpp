#include "adamant/simgen.hpp"

#include "adamant/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace adamant {
namespace {

// Symmetric square root of (1 - f) I + f 1 1^T applied to a row vector:
// sqrt(1 - f) z + c (sum z) 1 with c chosen so the 1-direction gets
// sqrt(1 + (m - 1) f).
struct CompoundSymmetricRoot {
  double identity_part;
  double ones_part;

  CompoundSymmetricRoot(std::size_t m, double f) {
    const double md = static_cast<double>(m);
    identity_part = std::sqrt(1.0 - f);
    ones_part = (std::sqrt(1.0 + (md - 1.0) * f) - identity_part) / md;
  }

  Eigen::MatrixXd apply_rows(const Eigen::MatrixXd& z) const {
    Eigen::MatrixXd out = identity_part * z;
    out.colwise() += ones_part * z.rowwise().sum();
    return out;
  }
};

Eigen::MatrixXd normals(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXd z(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) z(i, j) = rng.normal();
  }
  return z;
}

}  // namespace

DataMatrix gen_design(std::size_t n, std::size_t p, double rho, std::uint64_t seed) {
  if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in [0, 1)");
  if (n < 2 || p < 1) throw std::invalid_argument("design needs n >= 2 and p >= 1");
  Rng rng(seed);
  Eigen::MatrixXd z(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    for (Eigen::Index j = 0; j < z.cols(); ++j) z(i, j) = rng.normal();
  }
  const CompoundSymmetricRoot root(p, rho);
  return center_columns(DataMatrix(root.apply_rows(z)));
}

Eigen::VectorXd gen_univariate(const DataMatrix& x, const UnivariateSimConfig& config,
                               std::uint64_t seed) {
  if (!(config.sigma2 >= 0.0)) throw std::invalid_argument("sigma2 must be >= 0");
  const Eigen::Index p = x.cols();
  Rng rng(seed);
  Eigen::VectorXd beta(p);
  if (config.model == UnivariateSimConfig::Model::fixed) {
    for (Eigen::Index j = 0; j < p; ++j) {
      beta(j) = ((j + 1) % 2 == 0 ? 1.0 : -1.0) * config.effect;
    }
  } else {
    if (!(config.effect >= 0.0)) throw std::invalid_argument("sigma_b2 must be >= 0");
    const double sd = std::sqrt(config.effect);
    for (Eigen::Index j = 0; j < p; ++j) beta(j) = sd * rng.normal();
  }
  const double noise_sd = std::sqrt(config.sigma2);
  Eigen::VectorXd y = x.values() * beta;
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += noise_sd * rng.normal();
  return y;
}

DataMatrix gen_multivariate_vc(const DataMatrix& x, const MultivariateVcConfig& config,
                               std::uint64_t seed) {
  if (!(config.sigma_a2 >= 0.0)) throw std::invalid_argument("sigma_A2 must be >= 0");
  if (!(config.offdiag_factor >= 0.0 && config.offdiag_factor <= 1.0)) {
    throw std::invalid_argument("Sigma_A is not PSD: off-diagonal factor outside [0, 1]");
  }
  if (config.q < 1) throw std::invalid_argument("q must be >= 1");
  const auto n = x.rows();
  const auto p = x.cols();
  const auto q = static_cast<Eigen::Index>(config.q);
  Rng rng(seed);
  const Eigen::MatrixXd z = normals(p, q, rng);
  // Row covariance X X^T / p via X / sqrt(p); column covariance via the
  // compound-symmetric root (its rows act on the q outcome columns).
  const CompoundSymmetricRoot root(config.q, config.offdiag_factor);
  const double scale = std::sqrt(config.sigma_a2 / static_cast<double>(p));
  Eigen::MatrixXd y = scale * (x.values() * root.apply_rows(z));
  y += normals(n, q, rng);
  return DataMatrix(std::move(y));
}

DataMatrix gen_snp_groups(const EegGeneticsConfig& config, std::uint64_t seed) {
  if (config.n % 2 != 0) throw std::invalid_argument("SNP groups need an even n");
  if (config.n < 2 || config.p < 1) throw std::invalid_argument("SNP design needs n >= 2, p >= 1");
  const auto n = static_cast<Eigen::Index>(config.n);
  const auto p = static_cast<Eigen::Index>(config.p);
  Rng rng(seed);
  Eigen::MatrixXd group(2, p);
  for (Eigen::Index k = 0; k < 2; ++k) {
    for (Eigen::Index j = 0; j < p; ++j) {
      group(k, j) = static_cast<double>(rng.below(3)) - 1.0;
    }
  }
  Eigen::MatrixXd x(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index k = i < n / 2 ? 0 : 1;
    for (Eigen::Index j = 0; j < p; ++j) {
      x(i, j) = group(k, j) + config.snp_noise_sd * rng.normal();
    }
  }
  return center_columns(DataMatrix(std::move(x)));
}

std::array<double, 2> ar2_coefficients(double peak_hz, double sample_rate_hz,
                                       double coef2) {
  if (!(std::abs(coef2) < 1.0) || !(coef2 < 0.0)) {
    throw std::invalid_argument("second AR coefficient must lie in (-1, 0)");
  }
  if (!(peak_hz > 0.0 && peak_hz < sample_rate_hz / 2.0)) {
    throw std::invalid_argument("spectral peak must lie below the Nyquist frequency");
  }
  const double radius = std::sqrt(-coef2);
  const double angle = 2.0 * std::numbers::pi * peak_hz / sample_rate_hz;
  return {2.0 * radius * std::cos(angle), coef2};
}

Eigen::VectorXd simulate_ar2(const std::array<double, 2>& phi, std::size_t length,
                             std::size_t burn_in, Rng& rng) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(length));
  double prev1 = 0.0;
  double prev2 = 0.0;
  for (std::size_t t = 0; t < burn_in + length; ++t) {
    const double x = phi[0] * prev1 + phi[1] * prev2 + rng.normal();
    prev2 = prev1;
    prev1 = x;
    if (t >= burn_in) out(static_cast<Eigen::Index>(t - burn_in)) = x;
  }
  return out;
}

std::array<double, 2> normalize_mixing(double w1, double w2) {
  const double a = w1 * w1;
  const double b = w2 * w2;
  const double total = a + b;
  if (!(total > 0.0)) return {0.5, 0.5};
  const double first = a / total;
  return {first, 1.0 - first};
}

EegSimulator::EegSimulator(EegGeneticsConfig config, const DataMatrix& snps,
                           std::uint64_t seed)
    : config_(std::move(config)), seed_(seed) {
  const auto& c = config_;
  if (c.q < 1 || c.series_length < 2 || c.trials < 1) {
    throw std::invalid_argument("EEG design needs q >= 1, T >= 2 and at least one trial");
  }
  if (static_cast<std::size_t>(snps.rows()) != c.n) {
    throw std::invalid_argument("SNP matrix row count does not match n");
  }
  for (std::size_t m = 0; m < 2; ++m) {
    phi_[m] = ar2_coefficients(c.peaks_hz[m], c.sample_rate_hz, c.ar2_coef2);
  }
  if (c.scheme == EegGeneticsConfig::WeightScheme::bernoulli) {
    if (!(c.bern_p >= 0.0 && c.bern_p <= 1.0)) {
      throw std::invalid_argument("Bernoulli probability must lie in [0, 1]");
    }
    if (!(c.sigma_omega >= 0.0)) throw std::invalid_argument("sigma_omega must be >= 0");
  } else if (!(c.sigma_g2 >= 0.0)) {
    throw std::invalid_argument("sigma_g2 must be >= 0");
  }

  Rng rng(mix_seed(seed_, 0));
  const std::size_t null_channels = c.q / 2;
  std::vector<std::array<double, 2>> raw(c.n * c.q);
  auto at = [&](std::size_t i, std::size_t j) -> std::array<double, 2>& {
    return raw[i * c.q + j];
  };
  for (std::size_t j = 0; j < null_channels; ++j) {
    for (std::size_t i = 0; i < c.n; ++i) at(i, j) = {rng.normal(), rng.normal()};
  }
  if (c.scheme == EegGeneticsConfig::WeightScheme::bernoulli) {
    // group_weight[k][j][m] = W_scale * Bern(p); subjects add a log-normal
    // idiosyncratic perturbation.
    std::vector<std::array<std::array<double, 2>, 2>> group(c.q);
    for (std::size_t j = null_channels; j < c.q; ++j) {
      for (std::size_t k = 0; k < 2; ++k) {
        for (std::size_t m = 0; m < 2; ++m) {
          group[j][k][m] = c.w_scale * (rng.bernoulli(c.bern_p) ? 1.0 : 0.0);
        }
      }
    }
    for (std::size_t j = null_channels; j < c.q; ++j) {
      for (std::size_t i = 0; i < c.n; ++i) {
        const std::size_t k = i < c.n / 2 ? 0 : 1;
        for (std::size_t m = 0; m < 2; ++m) {
          at(i, j)[m] = group[j][k][m] + rng.lognormal(c.mu_omega, c.sigma_omega);
        }
      }
    }
  } else {
    // W_jm ~ N(0, sigma_g^2 X X^T), drawn as sigma_g X u with u ~ N(0, I_p).
    const double sd = std::sqrt(c.sigma_g2);
    for (std::size_t j = null_channels; j < c.q; ++j) {
      for (std::size_t m = 0; m < 2; ++m) {
        Eigen::VectorXd u(snps.cols());
        for (Eigen::Index l = 0; l < u.size(); ++l) u(l) = rng.normal();
        const Eigen::VectorXd w = sd * (snps.values() * u);
        for (std::size_t i = 0; i < c.n; ++i) at(i, j)[m] = w(static_cast<Eigen::Index>(i));
      }
    }
  }
  weights_.resize(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    weights_[k] = normalize_mixing(raw[k][0], raw[k][1]);
  }
}

Eigen::VectorXd EegSimulator::mixed_series(const std::array<double, 2>& weights,
                                           std::uint64_t stream) const {
  Rng rng(mix_seed(seed_, stream));
  const Eigen::VectorXd z1 = simulate_ar2(phi_[0], config_.series_length, config_.burn_in, rng);
  const Eigen::VectorXd z2 = simulate_ar2(phi_[1], config_.series_length, config_.burn_in, rng);
  return weights[0] * z1 + weights[1] * z2;
}

std::vector<TrialEpoch> EegSimulator::subject_trials(std::size_t subject) const {
  if (subject >= config_.n) throw std::out_of_range("subject index out of range");
  const auto q = static_cast<Eigen::Index>(config_.q);
  const auto t_len = static_cast<Eigen::Index>(config_.series_length);
  const std::uint64_t subject_seed = mix_seed(seed_, 1 + subject);
  std::vector<TrialEpoch> trials;
  trials.reserve(config_.trials);
  for (std::size_t t = 0; t < config_.trials; ++t) {
    Rng rng(mix_seed(subject_seed, t));
    const Eigen::VectorXd z1 = simulate_ar2(phi_[0], config_.series_length, config_.burn_in, rng);
    const Eigen::VectorXd z2 = simulate_ar2(phi_[1], config_.series_length, config_.burn_in, rng);
    Eigen::MatrixXd samples(q, t_len);
    for (Eigen::Index j = 0; j < q; ++j) {
      const auto w = weight(subject, static_cast<std::size_t>(j));
      samples.row(j) = (w[0] * z1 + w[1] * z2).transpose();
    }
    trials.emplace_back(std::move(samples), config_.sample_rate_hz);
  }
  return trials;
}

RotationDemo gen_rotation_demo(const RotationDemoConfig& config, std::uint64_t seed) {
  if (!(config.sigma_b2 >= 0.0) || !(config.sigma2 >= 0.0)) {
    throw std::invalid_argument("variances must be >= 0");
  }
  Rng rng(seed);
  const auto n = static_cast<Eigen::Index>(config.n);
  Eigen::MatrixXd raw(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    raw(i, 0) = rng.normal();
    raw(i, 1) = rng.normal();
  }
  DataMatrix x = center_columns(DataMatrix(std::move(raw)));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x.values(), Eigen::ComputeThinU);
  Eigen::Matrix2d rotation;
  rotation << std::cos(config.theta), -std::sin(config.theta),
      std::sin(config.theta), std::cos(config.theta);
  const Eigen::MatrixXd root =
      svd.matrixU() * rotation * svd.singularValues().asDiagonal();
  Eigen::Vector2d u(rng.normal(), rng.normal());
  Eigen::VectorXd y = std::sqrt(config.sigma_b2) * (root * u);
  const double noise_sd = std::sqrt(config.sigma2);
  for (Eigen::Index i = 0; i < n; ++i) y(i) += noise_sd * rng.normal();
  return {std::move(x), std::move(y), root * root.transpose()};
}

}  // namespace adamant
