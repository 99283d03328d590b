#pragma once

#include "adamant/kernels.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace adamant {

/// How the null reference distribution is sampled. In exhaustive mode every
/// permutation of 1..n is used once (n <= kMaxExhaustiveN) and `permutations`
/// is ignored.
struct PermutationPlan {
  std::size_t permutations = 1000;
  std::uint64_t seed = 42;
  bool exhaustive = false;
};

inline constexpr std::size_t kMaxExhaustiveN = 8;

/// Row b holds the b-th permutation of 0..n-1; row 0 is always the identity
/// (the observed data). Rows 1..B are drawn sequentially from the seed so the
/// set is fixed before any statistic is evaluated.
class PermutationSet {
 public:
  PermutationSet(std::size_t n, std::vector<std::uint32_t> indices);

  std::size_t n() const noexcept { return n_; }
  // B + 1, including the identity.
  std::size_t count() const noexcept { return n_ == 0 ? 0 : indices_.size() / n_; }
  std::size_t permutations() const noexcept { return count() - 1; }

  std::span<const std::uint32_t> operator[](std::size_t b) const {
    return {indices_.data() + b * n_, n_};
  }

 private:
  std::size_t n_;
  std::vector<std::uint32_t> indices_;
};

// Uniform draws with replacement across b (Fisher-Yates from the identity
// each time), or all n! permutations in lexicographic order when exhaustive.
PermutationSet generate_permutations(std::size_t n, const PermutationPlan& plan);

bool is_permutation(std::span<const std::uint32_t> perm, std::size_t n);

std::vector<std::uint32_t> inverse_permutation(
    std::span<const std::uint32_t> perm);

// out(i, j) = H(perm[i], perm[j]). Throws std::invalid_argument if perm is
// not a bijection on 0..n-1.
GramMatrix permute_gram(const GramMatrix& h,
                        std::span<const std::uint32_t> perm);

}  // namespace adamant
