#pragma once

#include "adamant/adamant.hpp"
#include "adamant/report.hpp"
#include "adamant/spectral.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace adamant {

// Kernel-pair expansion for `adamant test`: explicit pairs if given,
// otherwise the cross product of both penalty grids (heritability-derived
// penalties appended, duplicates dropped).
MetricPairList expand_metric_pairs(const TestConfig& config, std::size_t p,
                                   std::size_t q);

// Loads, centers (or standardizes), optionally residualizes both sides on
// [1 | covariates], runs the adaptive test and writes the JSON report when
// output_path is set.
TestReport run_test(const TestConfig& config, std::size_t threads = 0);

enum class Design { mvvc, uni_random, uni_fixed, eeg_vc, eeg_bernoulli, rotation };

Design parse_design(const std::string& name);
std::string to_string(Design design);

struct SimulateConfig {
  Design design = Design::mvvc;
  std::size_t n = 200;
  std::size_t p = 40;
  std::size_t q = 20;
  double effect = 0.0;   // sigma_A2, sigma_b2, |beta_j|, sigma_g2, W_scale, sigma_b2
  double sigma2 = 1.0;
  double rho = 0.1;      // compound-symmetric design correlation (mvvc, univariate)
  double theta = 0.0;    // rotation demo
  std::size_t trials = 100;
  std::uint64_t seed = 42;
  std::string out_x;
  std::string out_y;
  std::string epochs_dir;  // EEG designs: one epoch CSV per subject
};

void run_simulate(const SimulateConfig& config);

struct CoherenceConfig {
  std::string epochs_dir;
  std::vector<BandSpec> bands;
  double sample_rate_hz = 256.0;
  std::string output_path;
};

// Output file for each band: output_path itself for a single band, otherwise
// "<stem>_<band><ext>".
std::vector<std::filesystem::path> coherence_outputs(const CoherenceConfig& config);

// Returns the warnings raised while averaging.
std::vector<std::string> run_coherence(const CoherenceConfig& config,
                                       std::size_t threads = 0);

struct PowerConfig {
  Design design = Design::mvvc;
  std::size_t n = 200;
  std::size_t p = 40;
  std::size_t q = 20;
  std::vector<double> effects;          // empty -> design default
  std::vector<std::string> lambda_x;    // empty -> design default
  std::vector<std::string> lambda_y;
  std::size_t replicates = 200;
  std::size_t permutations = 500;
  double alpha = 0.05;
  double sigma2 = 1.0;
  double rho = 0.1;
  std::size_t trials = 100;
  std::uint64_t seed = 42;
  std::string output_path;
};

struct PowerRow {
  double effect_size = 0.0;
  std::string method;  // "adamant" or "mantel(lx,ly)"
  double power = 0.0;
  std::size_t replicates = 0;
  double mc_standard_error = 0.0;
};

struct PowerStudy {
  std::vector<double> effects;
  MetricPairList metrics;
  std::vector<std::string> methods;  // "adamant" then one per metric
  // rejections[e](r, k): replicate r of effect e rejected by method k.
  std::vector<Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>> rejections;
  std::vector<PowerRow> rows;
};

// Default effect grid and penalty grids for a design.
PowerConfig with_design_defaults(PowerConfig config);

PowerStudy run_power(const PowerConfig& config, std::size_t threads = 0);

void write_power_csv(const std::filesystem::path& path, const PowerStudy& study);

}  // namespace adamant
