#include <algorithm>
#include <numeric>
#include <string>

#include "topofeat/persistence.hpp"

namespace topofeat {

namespace {

// Symmetric difference of two sorted index lists (addition over Z/2).
void add_column(std::vector<std::uint32_t>& target, const std::vector<std::uint32_t>& source,
                std::vector<std::uint32_t>& scratch) {
  scratch.clear();
  std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                std::back_inserter(scratch));
  target.swap(scratch);
}

}  // namespace

std::vector<PersistenceDiagram> persistence_oracle_all(const FilteredComplex& complex,
                                                       std::size_t cell_limit) {
  const std::size_t n = complex.cell_count();
  if (n > cell_limit)
    throw ResourceError("boundary-matrix oracle limited to " + std::to_string(cell_limit) +
                        " cells, complex has " + std::to_string(n));

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (complex.value(a) != complex.value(b)) return complex.value(a) < complex.value(b);
    if (complex.dim(a) != complex.dim(b)) return complex.dim(a) < complex.dim(b);
    return a < b;
  });
  std::vector<std::uint32_t> position(n);
  for (std::uint32_t k = 0; k < n; ++k) position[order[k]] = k;

  std::vector<std::vector<std::uint32_t>> columns(n);
  for (std::uint32_t k = 0; k < n; ++k) {
    for (const SignedFace& f : complex.boundary(order[k])) columns[k].push_back(position[f.cell]);
    std::sort(columns[k].begin(), columns[k].end());
  }

  constexpr std::uint32_t kNone = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> column_with_low(n, kNone);
  std::vector<bool> paired(n, false);
  std::vector<std::uint32_t> scratch;
  std::vector<PersistenceDiagram> diagrams{{0, {}}, {1, {}}};

  for (std::uint32_t j = 0; j < n; ++j) {
    auto& col = columns[j];
    while (!col.empty() && column_with_low[col.back()] != kNone)
      add_column(col, columns[column_with_low[col.back()]], scratch);
    if (col.empty()) continue;
    const std::uint32_t low = col.back();
    column_with_low[low] = j;
    paired[low] = paired[j] = true;
    const double birth = complex.value(order[low]);
    const double death = complex.value(order[j]);
    const int degree = complex.dim(order[low]);
    if (birth < death && degree <= 1) diagrams[degree].pairs.push_back({birth, death});
  }

  for (std::uint32_t k = 0; k < n; ++k) {
    if (paired[k]) continue;
    const int degree = complex.dim(order[k]);
    if (degree <= 1)
      diagrams[degree].pairs.push_back(
          {complex.value(order[k]), std::numeric_limits<double>::infinity()});
  }
  return diagrams;
}

PersistenceDiagram persistence_oracle(const FilteredComplex& complex, int degree,
                                      std::size_t cell_limit) {
  if (degree != 0 && degree != 1) throw ParameterError("oracle supports degrees 0 and 1");
  return std::move(persistence_oracle_all(complex, cell_limit)[degree]);
}

}  // namespace topofeat
