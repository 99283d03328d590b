#include "adamant/permutation.hpp"

#include "adamant/rng.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace adamant {

PermutationSet::PermutationSet(std::size_t n, std::vector<std::uint32_t> indices)
    : n_(n), indices_(std::move(indices)) {
  if (n_ == 0 || indices_.size() % n_ != 0 || indices_.size() < n_) {
    throw std::invalid_argument("permutation set has inconsistent shape");
  }
}

PermutationSet generate_permutations(std::size_t n, const PermutationPlan& plan) {
  if (n == 0) throw std::invalid_argument("no observations to permute");
  std::vector<std::uint32_t> identity(n);
  std::iota(identity.begin(), identity.end(), 0u);

  std::vector<std::uint32_t> out;
  if (plan.exhaustive) {
    if (n > kMaxExhaustiveN) {
      throw std::invalid_argument("exhaustive permutation needs n <= " +
                                  std::to_string(kMaxExhaustiveN));
    }
    std::vector<std::uint32_t> perm = identity;
    do {
      out.insert(out.end(), perm.begin(), perm.end());
    } while (std::next_permutation(perm.begin(), perm.end()));
    return PermutationSet(n, std::move(out));
  }

  if (plan.permutations < 1) {
    throw std::invalid_argument("number of permutations must be >= 1");
  }
  out.reserve((plan.permutations + 1) * n);
  out.insert(out.end(), identity.begin(), identity.end());
  Rng rng(plan.seed);
  std::vector<std::uint32_t> perm(n);
  for (std::size_t b = 0; b < plan.permutations; ++b) {
    perm = identity;
    rng.shuffle(perm);
    out.insert(out.end(), perm.begin(), perm.end());
  }
  return PermutationSet(n, std::move(out));
}

bool is_permutation(std::span<const std::uint32_t> perm, std::size_t n) {
  if (perm.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (std::uint32_t v : perm) {
    if (v >= n || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

std::vector<std::uint32_t> inverse_permutation(
    std::span<const std::uint32_t> perm) {
  std::vector<std::uint32_t> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    inv[perm[i]] = static_cast<std::uint32_t>(i);
  }
  return inv;
}

GramMatrix permute_gram(const GramMatrix& h,
                        std::span<const std::uint32_t> perm) {
  const auto n = static_cast<std::size_t>(h.size());
  if (!is_permutation(perm, n)) {
    throw std::invalid_argument("invalid permutation (not a bijection on 0..n-1)");
  }
  const Eigen::MatrixXd& src = h.values();
  Eigen::MatrixXd out(h.size(), h.size());
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          src(perm[i], perm[j]);
    }
  }
  return GramMatrix(std::move(out));
}

}  // namespace adamant
