// SPDX-License-Identifier: Apache-2.0
//
// AVX2+FMA kernel variants. This translation unit is the only one built
// with -mavx2 -mfma; callers reach it through the runtime dispatch in
// kernels.cpp, so the rest of the library stays baseline x86-64.
#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "dgrd/kernels.hpp"

namespace dgrd::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

} // namespace

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d yv = _mm256_loadu_pd(y + k);
    yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + k), yv);
    _mm256_storeu_pd(y + k, yv);
  }
  for (; k < n; ++k) y[k] += a * x[k];
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc);
  double s = hsum(acc);
  for (; k < n; ++k) s += a[k] * b[k];
  return s;
}

double dot3(const double* w, const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + k), ab, acc);
  }
  double s = hsum(acc);
  for (; k < n; ++k) s += w[k] * (a[k] * b[k]);
  return s;
}

} // namespace dgrd::kernels::avx2

#endif // x86-64
