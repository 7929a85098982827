#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference and, on x86,
// an AVX2 variant chosen at runtime. Variants perform the same arithmetic in
// the same order (no FMA contraction), so their outputs are bit-identical.

#include <cstddef>
#include <span>

namespace topofeat::simd {

enum class Isa { scalar, avx2 };

const char* to_string(Isa isa) noexcept;

/// True when the AVX2 variants were compiled in and the CPU supports them.
bool avx2_available() noexcept;

/// Variant used by the dispatching entry points. Defaults to the best
/// available; the TOPOFEAT_SIMD=scalar environment variable forces scalar.
Isa active_isa() noexcept;

// Sobel correlation over an edge-padded (height+2) x (width+2) buffer.
// `out` is height x width.
//   x: (p[r-1][c+1]-p[r-1][c-1]) + 2(p[r][c+1]-p[r][c-1]) + (p[r+1][c+1]-p[r+1][c-1])
//   y: (p[r+1][c-1]-p[r-1][c-1]) + 2(p[r+1][c]-p[r-1][c]) + (p[r+1][c+1]-p[r-1][c+1])
void sobel_x(std::span<const double> padded, std::size_t height, std::size_t width,
             std::span<double> out);
void sobel_y(std::span<const double> padded, std::size_t height, std::size_t width,
             std::span<double> out);

/// grid[i][j] += row_factor[i] * col[j] for an n_rows x col.size() grid.
void rank1_update(std::span<double> grid, std::span<const double> row_factor,
                  std::span<const double> col);

namespace scalar {
void sobel_x(const double* padded, std::size_t height, std::size_t width, double* out);
void sobel_y(const double* padded, std::size_t height, std::size_t width, double* out);
void rank1_update(double* grid, const double* row_factor, std::size_t rows, const double* col,
                  std::size_t cols);
}  // namespace scalar

#if defined(TOPOFEAT_HAVE_AVX2)
namespace avx2 {
void sobel_x(const double* padded, std::size_t height, std::size_t width, double* out);
void sobel_y(const double* padded, std::size_t height, std::size_t width, double* out);
void rank1_update(double* grid, const double* row_factor, std::size_t rows, const double* col,
                  std::size_t cols);
}  // namespace avx2
#endif

}  // namespace topofeat::simd
