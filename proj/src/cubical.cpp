#include "topofeat/cubical.hpp"

#include <algorithm>
#include <limits>

namespace topofeat {

FilteredComplex::FilteredComplex(const FiltrationField& field) : field_(field) {
  const std::size_t rows = grid_rows();
  const std::size_t cols = grid_cols();
  values_.assign(rows * cols, std::numeric_limits<double>::infinity());
  for (std::size_t r = 0; r < field.height(); ++r) {
    for (std::size_t c = 0; c < field.width(); ++c) {
      const double v = field(r, c);
      // The closed pixel covers doubled-grid rows 2r..2r+2, cols 2c..2c+2.
      for (std::size_t i = 2 * r; i <= 2 * r + 2; ++i)
        for (std::size_t j = 2 * c; j <= 2 * c + 2; ++j)
          values_[i * cols + j] = std::min(values_[i * cols + j], v);
    }
  }
}

CubicalCell FilteredComplex::cell(std::size_t index) const {
  const std::size_t i = index / grid_cols();
  const std::size_t j = index % grid_cols();
  CubicalCell cell;
  cell.anchor = {static_cast<int>(i / 2), static_cast<int>(j / 2)};
  cell.extension = {i % 2 ? Extent::extend : Extent::fixed, j % 2 ? Extent::extend : Extent::fixed};
  return cell;
}

std::size_t FilteredComplex::index_of(const CubicalCell& cell) const {
  const auto i = static_cast<std::size_t>(2 * cell.anchor[0] + (cell.extension[0] == Extent::extend));
  const auto j = static_cast<std::size_t>(2 * cell.anchor[1] + (cell.extension[1] == Extent::extend));
  if (cell.anchor[0] < 0 || cell.anchor[1] < 0 || i >= grid_rows() || j >= grid_cols())
    throw IndexError("cell outside the grid complex");
  return i * grid_cols() + j;
}

int FilteredComplex::dim(std::size_t index) const noexcept {
  const std::size_t i = index / grid_cols();
  const std::size_t j = index % grid_cols();
  return static_cast<int>(i % 2) + static_cast<int>(j % 2);
}

std::vector<SignedFace> FilteredComplex::boundary(std::size_t index) const {
  const std::size_t cols = grid_cols();
  const std::size_t i = index / cols;
  const std::size_t j = index % cols;
  std::vector<SignedFace> faces;
  int z = 0;
  if (i % 2) {
    const int sign = (z % 2) ? -1 : 1;
    faces.push_back({(i + 1) * cols + j, sign});   // top along rows
    faces.push_back({(i - 1) * cols + j, -sign});  // bottom along rows
    ++z;
  }
  if (j % 2) {
    const int sign = (z % 2) ? -1 : 1;
    faces.push_back({i * cols + j + 1, sign});
    faces.push_back({i * cols + j - 1, -sign});
  }
  return faces;
}

FilteredComplex build_complex(const FiltrationField& field) { return FilteredComplex(field); }

}  // namespace topofeat
