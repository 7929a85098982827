#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "topofeat/image.hpp"

namespace topofeat {

/// Real value per pixel (top cell). Values are always finite.
class FiltrationField {
 public:
  FiltrationField() = default;
  explicit FiltrationField(Grid2D<double> values);
  FiltrationField(std::size_t height, std::size_t width, std::vector<double> values);

  std::size_t height() const noexcept { return grid_.height(); }
  std::size_t width() const noexcept { return grid_.width(); }
  double operator()(std::size_t row, std::size_t col) const noexcept { return grid_(row, col); }
  std::span<const double> values() const noexcept { return grid_.values(); }
  const Grid2D<double>& grid() const noexcept { return grid_; }

  double min_value() const;
  double max_value() const;

  FiltrationField transposed() const { return FiltrationField(grid_.transposed()); }

  friend bool operator==(const FiltrationField&, const FiltrationField&) = default;

 private:
  Grid2D<double> grid_;
};

/// Unit vector in (row, col) coordinates.
class Direction {
 public:
  Direction(double drow, double dcol);
  static Direction up() { return {-1.0, 0.0}; }
  static Direction down() { return {1.0, 0.0}; }
  static Direction left() { return {0.0, -1.0}; }
  static Direction right() { return {0.0, 1.0}; }

  double row() const noexcept { return v_[0]; }
  double col() const noexcept { return v_[1]; }
  /// "up", "down", "left", "right" for the cardinals, otherwise "d<row>_<col>".
  std::string name() const;

  friend bool operator==(const Direction&, const Direction&) = default;

 private:
  std::array<double, 2> v_;
};

/// Pixel coordinate (row, col); validated against image bounds at use.
struct Center {
  double row = 0.0;
  double col = 0.0;
  std::string name() const;
  friend bool operator==(const Center&, const Center&) = default;
};

/// Foreground pixels get <x, v> with x = (row, col); background gets the
/// maximum of <x, v> over every pixel of the grid.
FiltrationField height_filtration(const BinaryMask& mask, const Direction& v);

/// Foreground pixels get ||x - c||_2; background gets the maximum distance
/// from c over every pixel of the grid.
FiltrationField radial_filtration(const BinaryMask& mask, const Center& c);

FiltrationField grayscale_filtration(const Channel& channel);

/// Maps v to floor(v * (levels - 1) + 0.5) / (levels - 1).
Channel histogram_binning(const Channel& channel, std::size_t levels);

/// Base-2 Shannon entropy of the k x k neighbourhood histogram of each pixel,
/// after quantizing intensities to `levels` bins. Borders replicate edges, so
/// every neighbourhood holds exactly k*k samples.
FiltrationField local_entropy_filtration(const Channel& channel, std::size_t k,
                                         std::size_t levels = 256);

enum class GradientAxis { x, y };

/// Sobel correlation with edge-replicated padding. Axis x differentiates
/// along columns, axis y along rows. Values may be negative.
FiltrationField gradient_filtration(const Channel& channel, GradientAxis axis);

/// Subtracts the field minimum so every value is >= 0.
FiltrationField shift_to_nonnegative(const FiltrationField& field);

}  // namespace topofeat
