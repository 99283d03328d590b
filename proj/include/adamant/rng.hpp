#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace adamant {

// SplitMix64 finalizer; maps (seed, stream index) pairs to independent seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Seedable generator whose output is fixed by the seed alone on every
/// platform: the engine is std::mt19937_64 (sequence fixed by the standard)
/// and every distribution is implemented here rather than taken from the
/// standard library, whose distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1).
  double uniform_open();
  // Unbiased integer in [0, bound) (Lemire's multiply-and-reject).
  std::uint64_t below(std::uint64_t bound);
  // Standard normal via the Box-Muller transform.
  double normal();
  double lognormal(double mu, double sigma);
  bool bernoulli(double p) { return uniform() < p; }

  // Fisher-Yates shuffle driven by below().
  void shuffle(std::span<std::uint32_t> values);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace adamant
