#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "topofeat/error.hpp"

namespace topofeat {

/// Dense row-major H x W array. Used for single channels, masks and the
/// intermediate buffers of the filtrations.
template <class T>
class Grid2D {
 public:
  Grid2D() = default;
  Grid2D(std::size_t height, std::size_t width, T fill = T{})
      : height_(height), width_(width), data_(height * width, fill) {
    if (height == 0 || width == 0) throw DimensionError("grid dimensions must be positive");
  }
  Grid2D(std::size_t height, std::size_t width, std::vector<T> data)
      : height_(height), width_(width), data_(std::move(data)) {
    if (height == 0 || width == 0) throw DimensionError("grid dimensions must be positive");
    if (data_.size() != height * width)
      throw DimensionError("grid data length " + std::to_string(data_.size()) + " != " +
                           std::to_string(height) + "x" + std::to_string(width));
  }

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }

  T& operator()(std::size_t row, std::size_t col) noexcept { return data_[row * width_ + col]; }
  const T& operator()(std::size_t row, std::size_t col) const noexcept {
    return data_[row * width_ + col];
  }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  Grid2D transposed() const {
    Grid2D out(width_, height_);
    for (std::size_t r = 0; r < height_; ++r)
      for (std::size_t c = 0; c < width_; ++c) out(c, r) = (*this)(r, c);
    return out;
  }

  friend bool operator==(const Grid2D&, const Grid2D&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<T> data_;
};

using Channel = Grid2D<double>;

/// One boolean per pixel; stored as bytes so spans stay addressable.
using BinaryMask = Grid2D<std::uint8_t>;

/// H x W x C raster with intensities in [0, 1], stored plane by plane
/// (all of channel 0 row-major, then channel 1, ...).
class ImageGrid {
 public:
  ImageGrid(std::size_t height, std::size_t width, std::size_t channels, std::vector<double> data);

  static ImageGrid from_channels(std::span<const Channel> planes);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t channels() const noexcept { return channels_; }

  double at(std::size_t channel, std::size_t row, std::size_t col) const noexcept {
    return data_[(channel * height_ + row) * width_ + col];
  }
  std::span<const double> plane(std::size_t channel) const;
  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const ImageGrid&, const ImageGrid&) = default;

 private:
  std::size_t height_;
  std::size_t width_;
  std::size_t channels_;
  std::vector<double> data_;
};

enum class ResampleMethod { area, bilinear };

/// Resamples to target (h, w). Area averaging integrates each output cell's
/// footprint exactly; bilinear samples at pixel centers.
ImageGrid downsample(const ImageGrid& img, std::size_t target_height, std::size_t target_width,
                     ResampleMethod method = ResampleMethod::area);

Channel select_channel(const ImageGrid& img, std::size_t channel);

enum class ThresholdMode { keep_above, keep_below };

/// keep_above: v >= threshold; keep_below: v <= threshold.
BinaryMask binarize(const Channel& channel, double threshold, ThresholdMode mode);

struct ClassStats {
  std::string label;
  std::vector<double> mean;  // per channel
  std::vector<double> sd;    // per channel, population convention
  std::size_t count = 0;     // images
};

/// Streaming per-class accumulator behind `class_stats`. Pixel sums are kept
/// per image and merged with Chan's parallel update, so results do not depend
/// on the order images arrive in beyond floating-point rounding.
class ClassStatsAccumulator {
 public:
  void add(const std::string& label, const ImageGrid& img);
  bool empty() const noexcept { return classes_.empty(); }
  /// Classes in lexicographic label order.
  std::vector<ClassStats> result() const;

 private:
  struct Moments {
    double n = 0;
    double mean = 0;
    double m2 = 0;
  };
  struct PerClass {
    std::vector<Moments> channels;
    std::size_t images = 0;
  };
  std::map<std::string, PerClass> classes_;
};

struct LabeledImage {
  std::string label;
  ImageGrid image;
};

std::vector<ClassStats> class_stats(std::span<const LabeledImage> dataset);

}  // namespace topofeat
