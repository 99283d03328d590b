#include "adamant/adamant.hpp"

#include "adamant/parallel.hpp"
#include "adamant/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace adamant {
namespace {

std::size_t resolve_threads(std::size_t requested) {
  return requested == 0 ? configured_threads() : requested;
}

// Number of entries in `sorted` that are >= t within the tie tolerance.
std::uint32_t count_at_least(const std::vector<double>& sorted, double t,
                             double tie_tolerance) {
  const double bound = t - tie_tolerance * std::abs(t);
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), bound);
  return static_cast<std::uint32_t>(sorted.end() - it);
}

std::size_t index_of(std::vector<KernelSpec>& specs, const KernelSpec& s) {
  const auto it = std::find(specs.begin(), specs.end(), s);
  if (it != specs.end()) return static_cast<std::size_t>(it - specs.begin());
  specs.push_back(s);
  return specs.size() - 1;
}

}  // namespace

MetricPairList cross_product(const std::vector<KernelSpec>& x_specs,
                             const std::vector<KernelSpec>& y_specs) {
  MetricPairList out;
  out.reserve(x_specs.size() * y_specs.size());
  for (const auto& xs : x_specs) {
    for (const auto& ys : y_specs) out.push_back({xs, ys});
  }
  return out;
}

GramPairs build_gram_pairs(const DataMatrix& x, const DataMatrix& y,
                           const MetricPairList& metrics) {
  if (metrics.empty()) throw std::invalid_argument("empty metric list");
  if (x.rows() != y.rows()) {
    throw std::invalid_argument("dimension mismatch: X has " +
                                std::to_string(x.rows()) + " rows, Y has " +
                                std::to_string(y.rows()));
  }
  x.require_centered("adamant");
  y.require_centered("adamant");

  std::vector<KernelSpec> x_specs;
  std::vector<KernelSpec> y_specs;
  GramPairs out;
  for (const auto& m : metrics) {
    out.pairs.emplace_back(index_of(x_specs, m.x), index_of(y_specs, m.y));
  }

  // One factorization per side serves every spec routed to the svd path.
  auto build = [](const DataMatrix& data, const std::vector<KernelSpec>& specs) {
    std::vector<GramMatrix> grams;
    std::optional<SvdFactor> factor;
    for (const auto& spec : specs) {
      if (resolve_path(data.rows(), data.cols(), spec) == GramPath::svd) {
        if (!factor) factor = svd_thin(data);
        grams.push_back(gram_from_svd(*factor, spec));
      } else {
        grams.push_back(gram(data, spec));
      }
    }
    return grams;
  };
  out.x = build(x, x_specs);
  out.y = build(y, y_specs);
  return out;
}

Eigen::MatrixXd permutation_statistics(const GramPairs& grams,
                                       const PermutationSet& perms,
                                       std::size_t threads) {
  const std::size_t n = perms.n();
  for (const auto* side : {&grams.x, &grams.y}) {
    for (const auto& g : *side) {
      if (static_cast<std::size_t>(g.size()) != n) {
        throw std::invalid_argument("gram matrix size does not match permutations");
      }
    }
  }
  const std::size_t m_count = grams.pairs.size();
  if (m_count == 0) throw std::invalid_argument("empty metric list");

  // tr(H_pi K) = tr(H K_{pi^-1}): permute whichever side has fewer distinct
  // matrices, then reuse each permuted copy for all of its partners.
  const bool permute_x = grams.x.size() <= grams.y.size();
  const auto& moving = permute_x ? grams.x : grams.y;
  const auto& fixed = permute_x ? grams.y : grams.x;
  struct Partner {
    std::size_t metric;
    std::size_t fixed_index;
  };
  std::vector<std::vector<Partner>> partners(moving.size());
  for (std::size_t m = 0; m < m_count; ++m) {
    const auto [xi, yi] = grams.pairs[m];
    if (xi >= grams.x.size() || yi >= grams.y.size()) {
      throw std::invalid_argument("metric pair index out of range");
    }
    partners[permute_x ? xi : yi].push_back({m, permute_x ? yi : xi});
  }

  const auto& kernels = simd::active();
  const std::size_t total = perms.count();
  Eigen::MatrixXd table(static_cast<Eigen::Index>(total),
                        static_cast<Eigen::Index>(m_count));
  parallel_for(total, resolve_threads(threads), [&](std::size_t begin, std::size_t end) {
    std::vector<double> buffer(n * n);
    std::vector<std::uint32_t> inverse(n);
    for (std::size_t b = begin; b < end; ++b) {
      const auto perm = perms[b];
      const std::uint32_t* index = perm.data();
      if (!permute_x) {
        for (std::size_t i = 0; i < n; ++i) inverse[perm[i]] = static_cast<std::uint32_t>(i);
        index = inverse.data();
      }
      for (std::size_t g = 0; g < moving.size(); ++g) {
        const auto& users = partners[g];
        if (users.empty()) continue;
        const double* src = moving[g].values().data();
        if (users.size() == 1) {
          const double* other = fixed[users[0].fixed_index].values().data();
          table(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(users[0].metric)) =
              kernels.permuted_trace(src, other, n, index);
          continue;
        }
        kernels.gather_permuted(src, n, index, buffer.data());
        for (const auto& u : users) {
          const double* other = fixed[u.fixed_index].values().data();
          table(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(u.metric)) =
              kernels.dot(buffer.data(), other, n * n);
        }
      }
    }
  });
  return table;
}

AdaMantResult calibrate(Eigen::MatrixXd stat_table, const AdaMantOptions& options) {
  const auto rows = stat_table.rows();
  const auto cols = stat_table.cols();
  if (rows < 2 || cols < 1) {
    throw std::invalid_argument("statistic table needs B >= 1 and M >= 1");
  }
  AdaMantResult r;
  r.permutations = static_cast<std::size_t>(rows - 1);
  r.p_counts.resize(rows, cols);
  const double denom = static_cast<double>(rows);

  std::vector<double> sorted(static_cast<std::size_t>(rows));
  for (Eigen::Index m = 0; m < cols; ++m) {
    for (Eigen::Index b = 0; b < rows; ++b) sorted[b] = stat_table(b, m);
    std::sort(sorted.begin(), sorted.end());
    for (Eigen::Index b = 0; b < rows; ++b) {
      r.p_counts(b, m) = count_at_least(sorted, stat_table(b, m), options.tie_tolerance);
    }
  }

  r.min_p_counts.resize(static_cast<std::size_t>(rows));
  for (Eigen::Index b = 0; b < rows; ++b) r.min_p_counts[b] = r.p_counts.row(b).minCoeff();

  const std::uint32_t observed = r.min_p_counts[0];
  std::size_t extreme = 0;
  for (std::uint32_t c : r.min_p_counts) {
    if (options.literal_indicator ? observed <= c : observed >= c) ++extreme;
  }
  r.adaptive_p = static_cast<double>(extreme) / denom;

  for (Eigen::Index m = 0; m < cols; ++m) {
    r.per_metric_stat.push_back(stat_table(0, m));
    r.per_metric_p.push_back(static_cast<double>(r.p_counts(0, m)) / denom);
    if (r.p_counts(0, m) < r.p_counts(0, static_cast<Eigen::Index>(r.selected_metric))) {
      r.selected_metric = static_cast<std::size_t>(m);
    }
  }
  r.stat_table = std::move(stat_table);
  return r;
}

AdaMantResult adamant(const GramPairs& grams, const PermutationSet& perms,
                      const AdaMantOptions& options) {
  return calibrate(permutation_statistics(grams, perms, options.threads), options);
}

AdaMantResult adamant(const DataMatrix& x, const DataMatrix& y,
                      const MetricPairList& metrics, const PermutationPlan& plan,
                      const AdaMantOptions& options) {
  const GramPairs grams = build_gram_pairs(x, y, metrics);
  const PermutationSet perms =
      generate_permutations(static_cast<std::size_t>(x.rows()), plan);
  AdaMantResult r = adamant(grams, perms, options);
  r.seed_echo = plan.seed;
  return r;
}

MantelTestResult single_mantel_test(const GramMatrix& h, const GramMatrix& k,
                                    const PermutationSet& perms,
                                    double tie_tolerance) {
  if (h.size() != k.size() || static_cast<std::size_t>(h.size()) != perms.n()) {
    throw std::invalid_argument("dimension mismatch");
  }
  const auto& kernels = simd::active();
  const std::size_t n = perms.n();
  MantelTestResult r;
  r.statistic = kernels.permuted_trace(h.values().data(), k.values().data(), n,
                                       perms[0].data());
  std::size_t at_least = 1;
  const double bound = r.statistic - tie_tolerance * std::abs(r.statistic);
  for (std::size_t b = 1; b < perms.count(); ++b) {
    const double t = kernels.permuted_trace(h.values().data(), k.values().data(),
                                            n, perms[b].data());
    r.permuted.push_back(t);
    if (t >= bound) ++at_least;
  }
  r.p_value = static_cast<double>(at_least) / static_cast<double>(perms.count());
  return r;
}

MantelTestResult single_mantel_test(const GramMatrix& h, const GramMatrix& k,
                                    const PermutationPlan& plan,
                                    double tie_tolerance) {
  if (h.size() != k.size()) throw std::invalid_argument("dimension mismatch");
  return single_mantel_test(
      h, k, generate_permutations(static_cast<std::size_t>(h.size()), plan),
      tie_tolerance);
}

std::vector<double> lambda_grid_from_heritability(
    std::size_t p, const std::vector<double>& h2_values) {
  if (p == 0) throw std::invalid_argument("feature count must be positive");
  std::vector<double> out;
  for (double h2 : h2_values) {
    if (!(h2 > 0.0 && h2 < 1.0)) {
      throw std::invalid_argument("heritability must lie in (0, 1), got " +
                                  std::to_string(h2));
    }
    out.push_back(static_cast<double>(p) * (1.0 - h2) / h2);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace adamant
