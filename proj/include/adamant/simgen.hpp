#pragma once

#include "adamant/data_matrix.hpp"
#include "adamant/spectral.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace adamant {

/// q = 1 outcome designs: y = X beta + e with beta_j = (-1)^j * effect
/// (fixed), or beta_j iid N(0, effect) (random).
struct UnivariateSimConfig {
  enum class Model { fixed, random };
  std::size_t n = 200;
  std::size_t p = 100;
  Model model = Model::random;
  double effect = 0.035 * 0.035;  // |beta_j| (fixed) or sigma_b^2 (random)
  double sigma2 = 1.0;
  double design_rho = 0.1;
};

/// Y = G + e, vec(G) ~ N(0, Sigma_A (x) X X^T / p) with compound-symmetric
/// Sigma_A = sigma_A2 [(1 - f) I + f 1 1^T].
struct MultivariateVcConfig {
  std::size_t n = 200;
  std::size_t p = 40;
  std::size_t q = 20;
  double sigma_a2 = 0.0;
  double offdiag_factor = 0.1;
};

struct EegGeneticsConfig {
  enum class WeightScheme { bernoulli, vc };
  std::size_t n = 200;
  std::size_t p = 300;
  std::size_t q = 20;
  std::array<double, 2> peaks_hz{5.12, 12.8};
  double ar2_coef2 = -0.99;
  double sample_rate_hz = 256.0;
  std::size_t series_length = 1000;
  std::size_t burn_in = 500;
  std::size_t trials = 100;
  WeightScheme scheme = WeightScheme::vc;
  double w_scale = 1.0;
  double bern_p = 0.1;
  double mu_omega = 0.5;
  double sigma_omega = 0.5;
  double sigma_g2 = 0.0;
  // Subject-level SNP noise standard deviation; 1 in the reference design.
  double snp_noise_sd = 1.0;
};

struct RotationDemoConfig {
  std::size_t n = 100;
  double theta = 0.0;
  double sigma_b2 = 1.0;
  double sigma2 = 1.0;
};

// Rows iid N(0, Sigma_X), Sigma_X = (1 - rho) I + rho 1 1^T, then centered.
DataMatrix gen_design(std::size_t n, std::size_t p, double rho, std::uint64_t seed);

Eigen::VectorXd gen_univariate(const DataMatrix& x, const UnivariateSimConfig& config,
                               std::uint64_t seed);

// Raw (uncentered) outcome matrix.
DataMatrix gen_multivariate_vc(const DataMatrix& x, const MultivariateVcConfig& config,
                               std::uint64_t seed);

// Two balanced groups sharing a {-1, 0, 1} group vector plus N(0, sd^2)
// subject noise; column-centered. Subjects 0..n/2-1 form group 1.
DataMatrix gen_snp_groups(const EegGeneticsConfig& config, std::uint64_t seed);

// phi1 = 2 r cos(2 pi f / rate), phi2 = -r^2 for a spectral peak at f.
std::array<double, 2> ar2_coefficients(double peak_hz, double sample_rate_hz,
                                       double coef2);

class Rng;
Eigen::VectorXd simulate_ar2(const std::array<double, 2>& phi, std::size_t length,
                             std::size_t burn_in, Rng& rng);

/// Subjects' EEG as mixtures of two latent AR(2) series. Mixing weights are
/// drawn at construction; trials are generated on demand from per-subject
/// seed streams, so any subject can be produced independently.
class EegSimulator {
 public:
  EegSimulator(EegGeneticsConfig config, const DataMatrix& snps, std::uint64_t seed);

  const EegGeneticsConfig& config() const noexcept { return config_; }
  // (subject, channel) -> normalized weights for the two latent series.
  const std::vector<std::array<double, 2>>& weights() const noexcept { return weights_; }
  std::array<double, 2> weight(std::size_t subject, std::size_t channel) const {
    return weights_[subject * config_.q + channel];
  }

  std::vector<TrialEpoch> subject_trials(std::size_t subject) const;
  // Channel series for explicit weights; exposes the mixing step for checks.
  Eigen::VectorXd mixed_series(const std::array<double, 2>& weights,
                               std::uint64_t stream) const;

 private:
  EegGeneticsConfig config_;
  std::array<std::array<double, 2>, 2> phi_;
  std::uint64_t seed_;
  std::vector<std::array<double, 2>> weights_;
};

// Squares both weights and scales them to sum to one; (0.5, 0.5) when both
// are zero.
std::array<double, 2> normalize_mixing(double w1, double w2);

struct RotationDemo {
  DataMatrix x;
  Eigen::VectorXd y;
  Eigen::MatrixXd kernel;  // K^(theta) = U Theta D^2 Theta^T U^T
};

RotationDemo gen_rotation_demo(const RotationDemoConfig& config, std::uint64_t seed);

}  // namespace adamant
