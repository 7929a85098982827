#pragma once

#include <filesystem>
#include <iosfwd>

#include "topofeat/pipeline.hpp"

namespace topofeat {

/// Header: feature names then "label"; one row per image in matrix order.
void write_feature_csv(std::ostream& out, const FeatureMatrix& matrix);

// Columnar binary layout, all integers little-endian:
//   "TFCOL001" | u32 n_columns | u64 n_rows
//   per column: u32 name length, name bytes
//   per feature column: n_rows float64
//   label column: per row u32 length, bytes
void write_feature_columnar(std::ostream& out, const FeatureMatrix& matrix);

/// Reads the columnar layout back (paths and failures are not stored).
FeatureMatrix read_feature_columnar(std::istream& in);

}  // namespace topofeat
