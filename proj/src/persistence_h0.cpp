#include <algorithm>
#include <numeric>

#include "topofeat/persistence.hpp"

namespace topofeat {

namespace {

// Disjoint sets over pixels. Each root remembers the processing rank of its
// component's first pixel, which is what the elder rule compares.
class ComponentForest {
 public:
  explicit ComponentForest(std::size_t n) : parent_(n), size_(n, 1), elder_rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) noexcept {
    std::size_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const std::size_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  void make(std::size_t x, std::size_t rank) noexcept { elder_rank_[x] = rank; }

  /// Joins the two components; the merged root keeps the smaller elder rank.
  void join(std::size_t a, std::size_t b) noexcept {
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    elder_rank_[a] = std::min(elder_rank_[a], elder_rank_[b]);
  }

  std::size_t elder_rank(std::size_t root) const noexcept { return elder_rank_[root]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::vector<std::size_t> elder_rank_;
};

}  // namespace

PersistenceDiagram persistence_h0(const FiltrationField& field) {
  const std::size_t h = field.height();
  const std::size_t w = field.width();
  const std::size_t n = h * w;
  auto values = field.values();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  constexpr std::size_t kUnseen = static_cast<std::size_t>(-1);
  std::vector<std::size_t> rank(n, kUnseen);
  ComponentForest forest(n);
  PersistenceDiagram diagram{0, {}};

  std::size_t roots[8];
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t p = order[k];
    const double t = values[p];
    const std::size_t r = p / w;
    const std::size_t c = p % w;

    std::size_t nroots = 0;
    for (int dr = -1; dr <= 1; ++dr) {
      if ((dr < 0 && r == 0) || (dr > 0 && r + 1 == h)) continue;
      for (int dc = -1; dc <= 1; ++dc) {
        if ((dr == 0 && dc == 0) || (dc < 0 && c == 0) || (dc > 0 && c + 1 == w)) continue;
        const std::size_t q = (r + dr) * w + (c + dc);
        if (rank[q] == kUnseen) continue;
        const std::size_t root = forest.find(q);
        if (std::find(roots, roots + nroots, root) == roots + nroots) roots[nroots++] = root;
      }
    }

    rank[p] = k;
    forest.make(p, k);
    if (nroots == 0) continue;

    std::size_t elder = roots[0];
    for (std::size_t i = 1; i < nroots; ++i)
      if (forest.elder_rank(roots[i]) < forest.elder_rank(elder)) elder = roots[i];

    std::size_t survivor = elder;
    for (std::size_t i = 0; i < nroots; ++i) {
      if (roots[i] == elder) continue;
      const double birth = values[order[forest.elder_rank(roots[i])]];
      if (birth < t) diagram.pairs.push_back({birth, t});
      forest.join(survivor, roots[i]);
      survivor = forest.find(survivor);
    }
    forest.join(survivor, p);
  }

  // One essential class per connected component of the whole grid.
  for (std::size_t p = 0; p < n; ++p) {
    if (forest.find(p) == p)
      diagram.pairs.push_back(
          {values[order[forest.elder_rank(p)]], std::numeric_limits<double>::infinity()});
  }
  return diagram;
}

PersistenceDiagram persistence_h0(const FilteredComplex& complex) {
  return persistence_h0(complex.field());
}

PersistenceDiagram PersistenceDiagram::sorted() const {
  PersistenceDiagram out = *this;
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

PersistenceDiagram finitize(const PersistenceDiagram& diagram, double max_value) {
  PersistenceDiagram out = diagram;
  for (PersistencePair& p : out.pairs) {
    if (p.birth > max_value || (!p.essential() && p.death > max_value))
      throw ParameterError("finitize: max value below a finite coordinate");
    if (p.essential()) p.death = max_value;
  }
  return out;
}

}  // namespace topofeat
