#include "adamant/simd/kernels.hpp"

#include <immintrin.h>

namespace adamant::simd::avx2 {
namespace {

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

inline __m128i load_indices(const std::uint32_t* perm) {
  return _mm_loadu_si128(reinterpret_cast<const __m128i*>(perm));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t len) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= len; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                           _mm256_loadu_pd(b + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8),
                           _mm256_loadu_pd(b + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12),
                           _mm256_loadu_pd(b + i + 12), acc3);
  }
  for (; i + 4 <= len; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double s = horizontal_sum(
      _mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
  for (; i < len; ++i) s += a[i] * b[i];
  return s;
}

void gather_permuted(const double* src, std::size_t n,
                     const std::uint32_t* perm, double* dst) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = src + static_cast<std::size_t>(perm[i]) * n;
    double* out = dst + i * n;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      _mm256_storeu_pd(out + j, _mm256_i32gather_pd(row, load_indices(perm + j), 8));
    }
    for (; j < n; ++j) out[j] = row[perm[j]];
  }
}

double permuted_trace(const double* h, const double* k, std::size_t n,
                      const std::uint32_t* perm) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  double tail = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = h + static_cast<std::size_t>(perm[i]) * n;
    const double* krow = k + i * n;
    std::size_t j = 0;
    for (; j + 8 <= n; j += 8) {
      const __m256d g0 = _mm256_i32gather_pd(row, load_indices(perm + j), 8);
      const __m256d g1 = _mm256_i32gather_pd(row, load_indices(perm + j + 4), 8);
      acc0 = _mm256_fmadd_pd(g0, _mm256_loadu_pd(krow + j), acc0);
      acc1 = _mm256_fmadd_pd(g1, _mm256_loadu_pd(krow + j + 4), acc1);
    }
    for (; j + 4 <= n; j += 4) {
      const __m256d g0 = _mm256_i32gather_pd(row, load_indices(perm + j), 8);
      acc0 = _mm256_fmadd_pd(g0, _mm256_loadu_pd(krow + j), acc0);
    }
    for (; j < n; ++j) tail += row[perm[j]] * krow[j];
  }
  return horizontal_sum(_mm256_add_pd(acc0, acc1)) + tail;
}

}  // namespace adamant::simd::avx2
