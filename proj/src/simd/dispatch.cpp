#include <cstdlib>
#include <cstring>
#include <string>

#include "topofeat/error.hpp"
#include "topofeat/simd/kernels.hpp"

namespace topofeat::simd {

const char* to_string(Isa isa) noexcept {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

bool avx2_available() noexcept {
#if defined(TOPOFEAT_HAVE_AVX2)
  static const bool ok = __builtin_cpu_supports("avx2");
  return ok;
#else
  return false;
#endif
}

Isa active_isa() noexcept {
  static const Isa isa = [] {
    const char* env = std::getenv("TOPOFEAT_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return Isa::scalar;
    return avx2_available() ? Isa::avx2 : Isa::scalar;
  }();
  return isa;
}

namespace {

void check_sobel_spans(std::span<const double> padded, std::size_t height, std::size_t width,
                       std::span<double> out) {
  if (padded.size() != (height + 2) * (width + 2) || out.size() != height * width)
    throw DimensionError("sobel buffers do not match " + std::to_string(height) + "x" +
                         std::to_string(width));
}

}  // namespace

void sobel_x(std::span<const double> padded, std::size_t height, std::size_t width,
             std::span<double> out) {
  check_sobel_spans(padded, height, width, out);
#if defined(TOPOFEAT_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::sobel_x(padded.data(), height, width, out.data());
#endif
  scalar::sobel_x(padded.data(), height, width, out.data());
}

void sobel_y(std::span<const double> padded, std::size_t height, std::size_t width,
             std::span<double> out) {
  check_sobel_spans(padded, height, width, out);
#if defined(TOPOFEAT_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::sobel_y(padded.data(), height, width, out.data());
#endif
  scalar::sobel_y(padded.data(), height, width, out.data());
}

void rank1_update(std::span<double> grid, std::span<const double> row_factor,
                  std::span<const double> col) {
  if (grid.size() != row_factor.size() * col.size())
    throw DimensionError("rank1_update grid does not match factor lengths");
#if defined(TOPOFEAT_HAVE_AVX2)
  if (active_isa() == Isa::avx2)
    return avx2::rank1_update(grid.data(), row_factor.data(), row_factor.size(), col.data(),
                              col.size());
#endif
  scalar::rank1_update(grid.data(), row_factor.data(), row_factor.size(), col.data(), col.size());
}

}  // namespace topofeat::simd
