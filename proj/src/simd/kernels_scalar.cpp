#include "topofeat/simd/kernels.hpp"

namespace topofeat::simd::scalar {

void sobel_x(const double* padded, std::size_t height, std::size_t width, double* out) {
  const std::size_t stride = width + 2;
  for (std::size_t r = 0; r < height; ++r) {
    const double* up = padded + r * stride;
    const double* mid = up + stride;
    const double* down = mid + stride;
    double* dst = out + r * width;
    for (std::size_t c = 0; c < width; ++c) {
      const double a = up[c + 2] - up[c];
      const double b = mid[c + 2] - mid[c];
      const double d = down[c + 2] - down[c];
      dst[c] = (a + 2.0 * b) + d;
    }
  }
}

void sobel_y(const double* padded, std::size_t height, std::size_t width, double* out) {
  const std::size_t stride = width + 2;
  for (std::size_t r = 0; r < height; ++r) {
    const double* up = padded + r * stride;
    const double* down = up + 2 * stride;
    double* dst = out + r * width;
    for (std::size_t c = 0; c < width; ++c) {
      const double a = down[c] - up[c];
      const double b = down[c + 1] - up[c + 1];
      const double d = down[c + 2] - up[c + 2];
      dst[c] = (a + 2.0 * b) + d;
    }
  }
}

void rank1_update(double* grid, const double* row_factor, std::size_t rows, const double* col,
                  std::size_t cols) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double s = row_factor[i];
    double* dst = grid + i * cols;
    for (std::size_t j = 0; j < cols; ++j) dst[j] = dst[j] + s * col[j];
  }
}

}  // namespace topofeat::simd::scalar
