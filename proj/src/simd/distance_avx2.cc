#include "terahac/simd/distance.h"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#endif

namespace terahac::simd {

#if defined(__x86_64__) || defined(__i386__)

__attribute__((target("avx2"))) double SquaredL2Avx2(const double* a,
                                                      const double* b,
                                                      size_t dim) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= dim; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  double sum = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < dim; ++i) {
    const double d = a[i] - b[i];
    sum = sum + d * d;
  }
  return sum;
}

#else

double SquaredL2Avx2(const double* a, const double* b, size_t dim) {
  return SquaredL2Scalar(a, b, dim);
}

#endif

}  // namespace terahac::simd
