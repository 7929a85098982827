#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "topofeat/filtration.hpp"

namespace topofeat {

enum class Extent : std::uint8_t { fixed, extend };

/// Elementary cube: anchor vertex plus, per axis (row, col), whether the cube
/// extends one unit along it. Dimension = number of extended axes.
struct CubicalCell {
  std::array<int, 2> anchor{};
  std::array<Extent, 2> extension{Extent::fixed, Extent::fixed};

  int dim() const noexcept {
    return (extension[0] == Extent::extend) + (extension[1] == Extent::extend);
  }
  friend bool operator==(const CubicalCell&, const CubicalCell&) = default;
};

struct SignedFace {
  std::size_t cell;
  int sign;
};

/// Full cubical complex of an H x W pixel grid (pixels are the 2-cells),
/// with each cell valued by the minimum over the pixels containing it.
///
/// Cells are indexed on the (2H+1) x (2W+1) doubled grid: index i*(2W+1)+j
/// where odd i / odd j mean the cell extends along rows / columns.
class FilteredComplex {
 public:
  explicit FilteredComplex(const FiltrationField& field);

  std::size_t pixel_height() const noexcept { return field_.height(); }
  std::size_t pixel_width() const noexcept { return field_.width(); }
  const FiltrationField& field() const noexcept { return field_; }

  std::size_t cell_count() const noexcept { return values_.size(); }
  std::size_t grid_rows() const noexcept { return 2 * field_.height() + 1; }
  std::size_t grid_cols() const noexcept { return 2 * field_.width() + 1; }

  CubicalCell cell(std::size_t index) const;
  std::size_t index_of(const CubicalCell& cell) const;
  int dim(std::size_t index) const noexcept;
  double value(std::size_t index) const noexcept { return values_[index]; }

  /// Index of the 2-cell covering pixel (row, col).
  std::size_t pixel_cell(std::size_t row, std::size_t col) const noexcept {
    return (2 * row + 1) * grid_cols() + (2 * col + 1);
  }

  /// Signed boundary: sum over extended axes k of (-1)^z(k) (top_k - bottom_k),
  /// z(k) counting extended axes before k.
  std::vector<SignedFace> boundary(std::size_t index) const;

 private:
  FiltrationField field_;
  std::vector<double> values_;
};

FilteredComplex build_complex(const FiltrationField& field);

}  // namespace topofeat
