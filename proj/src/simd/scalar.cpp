#include "adamant/simd/kernels.hpp"

namespace adamant::simd::scalar {

double dot(const double* a, const double* b, std::size_t len) {
  double s = 0.0;
  for (std::size_t i = 0; i < len; ++i) s += a[i] * b[i];
  return s;
}

void gather_permuted(const double* src, std::size_t n,
                     const std::uint32_t* perm, double* dst) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = src + static_cast<std::size_t>(perm[i]) * n;
    double* out = dst + i * n;
    for (std::size_t j = 0; j < n; ++j) out[j] = row[perm[j]];
  }
}

double permuted_trace(const double* h, const double* k, std::size_t n,
                      const std::uint32_t* perm) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = h + static_cast<std::size_t>(perm[i]) * n;
    const double* krow = k + i * n;
    for (std::size_t j = 0; j < n; ++j) s += row[perm[j]] * krow[j];
  }
  return s;
}

}  // namespace adamant::simd::scalar
