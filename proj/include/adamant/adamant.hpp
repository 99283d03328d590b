#pragma once

#include "adamant/data_matrix.hpp"
#include "adamant/kernels.hpp"
#include "adamant/permutation.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace adamant {

struct MetricPair {
  KernelSpec x;
  KernelSpec y;

  friend bool operator==(const MetricPair&, const MetricPair&) = default;
};

using MetricPairList = std::vector<MetricPair>;

// Full cross product, x-major: (x0,y0), (x0,y1), ...
MetricPairList cross_product(const std::vector<KernelSpec>& x_specs,
                             const std::vector<KernelSpec>& y_specs);

struct AdaMantOptions {
  // Statistic evaluations run on this many workers; results do not depend
  // on it. 0 means configured_threads().
  std::size_t threads = 0;
  // Two statistics tie when they differ by at most this fraction of the
  // reference magnitude. Absorbs rounding between algebraically equal values
  // (e.g. a permutation-invariant statistic summed in a different order).
  double tie_tolerance = 1e-12;
  // Count I(P^(0) <= P^(b)) as literally written in the min-p recipe instead of the
  // significance-consistent I(P^(0) >= P^(b)). For comparison only.
  bool literal_indicator = false;
};

struct AdaMantResult {
  std::vector<double> per_metric_stat;   // T_m^(0)
  std::vector<double> per_metric_p;      // P_m^(0)
  Eigen::MatrixXd stat_table;            // (B+1) x M, row 0 observed
  // (B+1) x M counts behind P_m^(b) = count / (B+1).
  Eigen::Matrix<std::uint32_t, Eigen::Dynamic, Eigen::Dynamic> p_counts;
  std::vector<std::uint32_t> min_p_counts;  // (B+1) P^(b)
  double adaptive_p = 1.0;
  std::size_t selected_metric = 0;
  std::size_t permutations = 0;  // B
  std::uint64_t seed_echo = 0;
};

/// Distinct Gram matrices plus the (x index, y index) pairs that combine them.
/// Sharing matrices across pairs lets the engine permute each one once.
struct GramPairs {
  std::vector<GramMatrix> x;
  std::vector<GramMatrix> y;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

GramPairs build_gram_pairs(const DataMatrix& x, const DataMatrix& y,
                           const MetricPairList& metrics);

// T_m^(b) = tr(H_m^(b) K_m) for every pair and every permutation in the set.
Eigen::MatrixXd permutation_statistics(const GramPairs& grams,
                                       const PermutationSet& perms,
                                       std::size_t threads);

// Both p-value layers and the adaptive p-value from a statistic table.
AdaMantResult calibrate(Eigen::MatrixXd stat_table, const AdaMantOptions& options);

AdaMantResult adamant(const GramPairs& grams, const PermutationSet& perms,
                      const AdaMantOptions& options = {});

AdaMantResult adamant(const DataMatrix& x, const DataMatrix& y,
                      const MetricPairList& metrics, const PermutationPlan& plan,
                      const AdaMantOptions& options = {});

struct MantelTestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::vector<double> permuted;  // T^(1..B)
};

// Single-pair Mantel test; larger statistic means stronger association.
MantelTestResult single_mantel_test(const GramMatrix& h, const GramMatrix& k,
                                    const PermutationSet& perms,
                                    double tie_tolerance = 1e-12);
MantelTestResult single_mantel_test(const GramMatrix& h, const GramMatrix& k,
                                    const PermutationPlan& plan,
                                    double tie_tolerance = 1e-12);

// lambda = p (1 - h2) / h2 for each heritability, deduplicated, ascending.
std::vector<double> lambda_grid_from_heritability(
    std::size_t p, const std::vector<double>& h2_values);

}  // namespace adamant
