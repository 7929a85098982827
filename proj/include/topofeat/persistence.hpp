#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "topofeat/cubical.hpp"

namespace topofeat {

struct PersistencePair {
  double birth = 0.0;
  double death = 0.0;  // +inf for essential classes until finitized

  double persistence() const noexcept { return death - birth; }
  bool essential() const noexcept { return death == std::numeric_limits<double>::infinity(); }

  friend auto operator<=>(const PersistencePair&, const PersistencePair&) = default;
};

struct PersistenceDiagram {
  int degree = 0;
  std::vector<PersistencePair> pairs;

  bool empty() const noexcept { return pairs.empty(); }
  /// Pairs sorted by (birth, death); multiset comparison uses this.
  PersistenceDiagram sorted() const;
  friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;
};

/// Degree-0 barcode of the sublevel filtration by union-find over pixels with
/// 8-connectivity (the connectivity the complex's shared vertices induce).
/// On a merge the younger component dies; equal births keep the component
/// whose first pixel comes first in row-major order. Pairs born and killed at
/// the same value are not reported. Essential bars have death = +inf.
PersistenceDiagram persistence_h0(const FiltrationField& field);
PersistenceDiagram persistence_h0(const FilteredComplex& complex);

inline constexpr std::size_t kOracleCellLimit = 10'000;

/// Reference barcode from the Z/2 reduction of the full boundary matrix,
/// columns in (value, dim, index) order. Reports only pairs with positive
/// persistence plus essential classes. Throws ResourceError above
/// `cell_limit` cells.
PersistenceDiagram persistence_oracle(const FilteredComplex& complex, int degree,
                                      std::size_t cell_limit = kOracleCellLimit);

/// Both degrees from a single reduction: result[0] is H0, result[1] is H1.
std::vector<PersistenceDiagram> persistence_oracle_all(const FilteredComplex& complex,
                                                       std::size_t cell_limit = kOracleCellLimit);

/// Replaces infinite deaths with `max_value`. Throws ParameterError if any
/// finite coordinate exceeds it.
PersistenceDiagram finitize(const PersistenceDiagram& diagram, double max_value);

}  // namespace topofeat
