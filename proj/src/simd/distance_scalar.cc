#include <cstdlib>
#include <cstring>

#include "terahac/simd/distance.h"

namespace terahac::simd {

std::string_view IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

bool IsaSupported(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(__x86_64__) || defined(__i386__)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa DetectIsa() {
  const char* force = std::getenv("TERAHAC_FORCE_SCALAR");
  if (force != nullptr && std::strcmp(force, "0") != 0) return Isa::kScalar;
  if (IsaSupported(Isa::kAvx2)) return Isa::kAvx2;
  if (IsaSupported(Isa::kNeon)) return Isa::kNeon;
  return Isa::kScalar;
}

double SquaredL2Scalar(const double* a, const double* b, size_t dim) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  size_t i = 0;
  for (; i + 4 <= dim; i += 4) {
    for (size_t j = 0; j < 4; ++j) {
      const double d = a[i + j] - b[i + j];
      lane[j] = lane[j] + d * d;
    }
  }
  double sum = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < dim; ++i) {
    const double d = a[i] - b[i];
    sum = sum + d * d;
  }
  return sum;
}

double SquaredL2(Isa isa, const double* a, const double* b, size_t dim) {
  switch (isa) {
    case Isa::kAvx2:
      if (IsaSupported(Isa::kAvx2)) return SquaredL2Avx2(a, b, dim);
      break;
    case Isa::kNeon:
      if (IsaSupported(Isa::kNeon)) return SquaredL2Neon(a, b, dim);
      break;
    case Isa::kScalar:
      break;
  }
  return SquaredL2Scalar(a, b, dim);
}

void SquaredL2ToRows(Isa isa, std::span<const double> query,
                     std::span<const double> points, size_t dim,
                     std::span<double> out) {
  if (!IsaSupported(isa)) isa = Isa::kScalar;
  const size_t rows = dim == 0 ? 0 : points.size() / dim;
  for (size_t r = 0; r < rows; ++r) {
    out[r] = SquaredL2(isa, query.data(), points.data() + r * dim, dim);
  }
}

}  // namespace terahac::simd
