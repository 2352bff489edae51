#include "terahac/simd/distance.h"

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace terahac::simd {

#if defined(__aarch64__)

// Two float64x2 accumulators hold lanes {0, 1} and {2, 3}.
double SquaredL2Neon(const double* a, const double* b, size_t dim) {
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 4 <= dim; i += 4) {
    const float64x2_t d0 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    const float64x2_t d1 = vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    lo = vaddq_f64(lo, vmulq_f64(d0, d0));
    hi = vaddq_f64(hi, vmulq_f64(d1, d1));
  }
  double sum = (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1)) +
               (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
  for (; i < dim; ++i) {
    const double d = a[i] - b[i];
    sum = sum + d * d;
  }
  return sum;
}

#else

double SquaredL2Neon(const double* a, const double* b, size_t dim) {
  return SquaredL2Scalar(a, b, dim);
}

#endif

}  // namespace terahac::simd
