#include "adamant/simd/kernels.hpp"

#include <arm_neon.h>

namespace adamant::simd::neon {

double dot(const double* a, const double* b, std::size_t len) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < len; ++i) s += a[i] * b[i];
  return s;
}

// NEON has no gather; the row lookup stays scalar and only the
// multiply-accumulate is vectorized.
void gather_permuted(const double* src, std::size_t n,
                     const std::uint32_t* perm, double* dst) {
  scalar::gather_permuted(src, n, perm, dst);
}

double permuted_trace(const double* h, const double* k, std::size_t n,
                      const std::uint32_t* perm) {
  float64x2_t acc = vdupq_n_f64(0.0);
  double tail = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = h + static_cast<std::size_t>(perm[i]) * n;
    const double* krow = k + i * n;
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
      const double pair[2] = {row[perm[j]], row[perm[j + 1]]};
      acc = vfmaq_f64(acc, vld1q_f64(pair), vld1q_f64(krow + j));
    }
    for (; j < n; ++j) tail += row[perm[j]] * krow[j];
  }
  return vaddvq_f64(acc) + tail;
}

}  // namespace adamant::simd::neon
