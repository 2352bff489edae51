#ifndef TERAHAC_SIMD_DISTANCE_H_
#define TERAHAC_SIMD_DISTANCE_H_

#include <cstddef>
#include <span>
#include <string_view>

namespace terahac::simd {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view IsaName(Isa isa);

// Best instruction set supported by the running CPU. Setting the environment
// variable TERAHAC_FORCE_SCALAR=1 pins the scalar kernels.
Isa DetectIsa();
bool IsaSupported(Isa isa);

// Squared Euclidean distance.
//
// All variants accumulate in four interleaved lanes (lane j sums coordinates
// i with i % 4 == j), combine them as (l0 + l1) + (l2 + l3) and add the tail
// last, without fused multiply-add. The vector kernels therefore return
// results bit-identical to the scalar reference.
double SquaredL2Scalar(const double* a, const double* b, size_t dim);
double SquaredL2Avx2(const double* a, const double* b, size_t dim);
double SquaredL2Neon(const double* a, const double* b, size_t dim);

// Dispatches to the kernel selected for `isa`; falls back to scalar when the
// variant is unavailable.
double SquaredL2(Isa isa, const double* a, const double* b, size_t dim);

// Squared distances from `query` to each row of the row-major `points`
// matrix with `dim` columns. `out` must hold points.size() / dim values.
void SquaredL2ToRows(Isa isa, std::span<const double> query,
                     std::span<const double> points, size_t dim,
                     std::span<double> out);

}  // namespace terahac::simd

#endif  // TERAHAC_SIMD_DISTANCE_H_
