#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace qdela::kernels {

// Data-parallel distance kernels behind the archive, CVT construction and
// nearest-better features. Every kernel has a scalar reference and an AVX2
// variant that is bit-identical to it: lanes run across points, so each
// point's arithmetic happens in the same order and without fused multiply-add.

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// True when the running CPU executes AVX2 and the variant was compiled in.
bool avx2_supported() noexcept;

/// ISA used by the dispatching entry points. Picked once at startup
/// (AVX2 when supported, unless QDELA_SIMD=scalar).
Isa active_isa() noexcept;
/// Override the dispatch; requesting an unsupported ISA falls back to scalar.
/// Returns the ISA actually selected. Not thread-safe with concurrent kernel calls.
Isa select_isa(Isa isa) noexcept;

/// Index of the (xs[j], ys[j]) nearest to (px, py); ties go to the lowest index.
/// Writes the squared distance to *best_sq when non-null. k must be positive.
std::size_t nearest_2d(double px, double py, std::span<const double> xs,
                       std::span<const double> ys, double* best_sq = nullptr);

/// dmin[i] = min(dmin[i], |(xs[i], ys[i]) - (cx, cy)|^2) for every i.
void min_update_2d(double cx, double cy, std::span<const double> xs,
                   std::span<const double> ys, std::span<double> dmin);

/// Squared Euclidean distances from point to every row of a column-major
/// m x d matrix (columns[j * m + i] is coordinate j of row i). Coordinates are
/// accumulated in order j = 0 .. d-1.
void sq_distances(std::span<const double> columns, std::size_t m,
                  std::span<const double> point, std::span<double> out);

namespace scalar {
std::size_t nearest_2d(double px, double py, const double* xs, const double* ys,
                       std::size_t k, double* best_sq);
void min_update_2d(double cx, double cy, const double* xs, const double* ys,
                   std::size_t n, double* dmin);
void sq_distances(const double* columns, std::size_t m, std::size_t d,
                  const double* point, double* out);
} // namespace scalar

namespace avx2 {
// Only callable when avx2_supported().
std::size_t nearest_2d(double px, double py, const double* xs, const double* ys,
                       std::size_t k, double* best_sq);
void min_update_2d(double cx, double cy, const double* xs, const double* ys,
                   std::size_t n, double* dmin);
void sq_distances(const double* columns, std::size_t m, std::size_t d,
                  const double* point, double* out);
} // namespace avx2

} // namespace qdela::kernels
