#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

// Inner loops of the permutation engine. Every instruction-set variant
// computes the same quantity as the scalar reference; only the summation
// order differs, so results agree to rounding rather than bit-for-bit.
// Matrices are dense n x n, symmetric, stored contiguously.

namespace adamant::simd {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);

struct KernelTable {
  Isa isa;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t len);
  // dst[i * n + j] = src[perm[i] * n + perm[j]]
  void (*gather_permuted)(const double* src, std::size_t n,
                          const std::uint32_t* perm, double* dst);
  // sum_ij h[perm[i] * n + perm[j]] * k[i * n + j], fused without a buffer.
  double (*permuted_trace)(const double* h, const double* k, std::size_t n,
                           const std::uint32_t* perm);
};

// Best variant supported by the running CPU. ADAMANT_SIMD=scalar|avx2|neon
// overrides the choice when that variant is available.
const KernelTable& active();

// nullptr when the variant is not compiled in or not supported by the CPU.
const KernelTable* table_for(Isa isa);

std::vector<Isa> available();

namespace scalar {
double dot(const double* a, const double* b, std::size_t len);
void gather_permuted(const double* src, std::size_t n,
                     const std::uint32_t* perm, double* dst);
double permuted_trace(const double* h, const double* k, std::size_t n,
                      const std::uint32_t* perm);
}  // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t len);
void gather_permuted(const double* src, std::size_t n,
                     const std::uint32_t* perm, double* dst);
double permuted_trace(const double* h, const double* k, std::size_t n,
                      const std::uint32_t* perm);
}  // namespace avx2

namespace neon {
double dot(const double* a, const double* b, std::size_t len);
void gather_permuted(const double* src, std::size_t n,
                     const std::uint32_t* perm, double* dst);
double permuted_trace(const double* h, const double* k, std::size_t n,
                      const std::uint32_t* perm);
}  // namespace neon

}  // namespace adamant::simd
