// Compiled with -mavx2; only reached through dispatch after a CPU check.
#include <immintrin.h>

#include "topofeat/simd/kernels.hpp"

namespace topofeat::simd::avx2 {

void sobel_x(const double* padded, std::size_t height, std::size_t width, double* out) {
  const std::size_t stride = width + 2;
  const __m256d two = _mm256_set1_pd(2.0);
  for (std::size_t r = 0; r < height; ++r) {
    const double* up = padded + r * stride;
    const double* mid = up + stride;
    const double* down = mid + stride;
    double* dst = out + r * width;
    std::size_t c = 0;
    for (; c + 4 <= width; c += 4) {
      const __m256d a = _mm256_sub_pd(_mm256_loadu_pd(up + c + 2), _mm256_loadu_pd(up + c));
      const __m256d b = _mm256_sub_pd(_mm256_loadu_pd(mid + c + 2), _mm256_loadu_pd(mid + c));
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(down + c + 2), _mm256_loadu_pd(down + c));
      _mm256_storeu_pd(dst + c, _mm256_add_pd(_mm256_add_pd(a, _mm256_mul_pd(two, b)), d));
    }
    for (; c < width; ++c) {
      const double a = up[c + 2] - up[c];
      const double b = mid[c + 2] - mid[c];
      const double d = down[c + 2] - down[c];
      dst[c] = (a + 2.0 * b) + d;
    }
  }
}

void sobel_y(const double* padded, std::size_t height, std::size_t width, double* out) {
  const std::size_t stride = width + 2;
  const __m256d two = _mm256_set1_pd(2.0);
  for (std::size_t r = 0; r < height; ++r) {
    const double* up = padded + r * stride;
    const double* down = up + 2 * stride;
    double* dst = out + r * width;
    std::size_t c = 0;
    for (; c + 4 <= width; c += 4) {
      const __m256d a = _mm256_sub_pd(_mm256_loadu_pd(down + c), _mm256_loadu_pd(up + c));
      const __m256d b = _mm256_sub_pd(_mm256_loadu_pd(down + c + 1), _mm256_loadu_pd(up + c + 1));
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(down + c + 2), _mm256_loadu_pd(up + c + 2));
      _mm256_storeu_pd(dst + c, _mm256_add_pd(_mm256_add_pd(a, _mm256_mul_pd(two, b)), d));
    }
    for (; c < width; ++c) {
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
    const __m256d s = _mm256_set1_pd(row_factor[i]);
    double* dst = grid + i * cols;
    std::size_t j = 0;
    for (; j + 4 <= cols; j += 4) {
      const __m256d prod = _mm256_mul_pd(s, _mm256_loadu_pd(col + j));
      _mm256_storeu_pd(dst + j, _mm256_add_pd(_mm256_loadu_pd(dst + j), prod));
    }
    for (; j < cols; ++j) dst[j] = dst[j] + row_factor[i] * col[j];
  }
}

}  // namespace topofeat::simd::avx2
