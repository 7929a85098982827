#include "topofeat/diagram_features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "topofeat/format.hpp"
#include "topofeat/simd/kernels.hpp"

namespace topofeat {

namespace {

void require_finite(const PersistenceDiagram& d) {
  for (const PersistencePair& p : d.pairs)
    if (!std::isfinite(p.birth) || !std::isfinite(p.death))
      throw ParameterError("diagram has an essential bar; finitize it first");
}

std::vector<PersistencePair> positive_bars(const PersistenceDiagram& d) {
  require_finite(d);
  std::vector<PersistencePair> out;
  for (const PersistencePair& p : d.pairs)
    if (p.death > p.birth) out.push_back(p);
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> x(n);
  if (n == 1) {
    x[0] = lo;
    return x;
  }
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) x[i] = lo + step * static_cast<double>(i);
  x[n - 1] = hi;
  return x;
}

// Trapezoid weights in units of the grid step.
double trapezoid_weight(std::size_t i, std::size_t n) { return (i == 0 || i + 1 == n) ? 0.5 : 1.0; }

void require_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw ParameterError("norm order p must be >= 1");
}

}  // namespace

void DescriptorParams::validate() const {
  require_p(p);
  if (!(t > 0.0) || !std::isfinite(t)) throw ParameterError("heat parameter t must be > 0");
  if (n_bins < 2) throw ParameterError("n_bins must be at least 2");
  if (n_layers < 1) throw ParameterError("n_layers must be at least 1");
}

double scale_factor(const PersistenceDiagram& d) { return bottleneck_amplitude(d); }

PersistenceDiagram scale_diagram(const PersistenceDiagram& d) {
  const double s = scale_factor(d);
  if (s == 0.0) return d;
  PersistenceDiagram out = d;
  for (PersistencePair& p : out.pairs) {
    p.birth /= s;
    p.death /= s;
  }
  return out;
}

std::size_t betti_value(const PersistenceDiagram& d, double x) {
  require_finite(d);
  std::size_t count = 0;
  for (const PersistencePair& p : d.pairs)
    if (p.birth <= x && x < p.death) ++count;
  return count;
}

SampledCurve betti_curve(const PersistenceDiagram& d, std::size_t n_bins) {
  if (n_bins == 0) throw ParameterError("n_bins must be positive");
  const auto bars = positive_bars(d);
  SampledCurve curve;
  if (bars.empty()) {
    curve.x.assign(n_bins, 0.0);
    curve.y.assign(n_bins, 0.0);
    return curve;
  }
  double lo = bars.front().birth;
  double hi = bars.front().death;
  for (const auto& b : bars) {
    lo = std::min(lo, b.birth);
    hi = std::max(hi, b.death);
  }
  curve.x = linspace(lo, hi, n_bins);
  curve.y.reserve(n_bins);
  for (double x : curve.x) curve.y.push_back(static_cast<double>(betti_value(d, x)));
  return curve;
}

double betti_amplitude(const PersistenceDiagram& d, double p) {
  require_p(p);
  const auto bars = positive_bars(d);
  if (bars.empty()) return 0.0;

  // Sweep: +1 at each birth, -1 at each death; B is constant between events.
  std::vector<std::pair<double, int>> events;
  events.reserve(2 * bars.size());
  for (const auto& b : bars) {
    events.emplace_back(b.birth, +1);
    events.emplace_back(b.death, -1);
  }
  std::sort(events.begin(), events.end());
  double integral = 0.0;
  long level = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    level += events[i].second;
    if (i + 1 < events.size() && level > 0) {
      const double len = events[i + 1].first - events[i].first;
      if (len > 0.0) integral += std::pow(static_cast<double>(level), p) * len;
    }
  }
  return std::pow(integral, 1.0 / p);
}

double bottleneck_amplitude(const PersistenceDiagram& d) {
  require_finite(d);
  double best = 0.0;
  for (const PersistencePair& p : d.pairs) best = std::max(best, (p.death - p.birth) / 2.0);
  return best;
}

double wasserstein_amplitude(const PersistenceDiagram& d, double p) {
  require_p(p);
  const double top = bottleneck_amplitude(d);
  if (top == 0.0) return 0.0;
  // Factor out the largest term so large p cannot overflow.
  double sum = 0.0;
  for (const PersistencePair& pair : d.pairs) {
    const double half = (pair.death - pair.birth) / 2.0;
    if (half > 0.0) sum += std::pow(half / top, p);
  }
  return top * std::pow(sum, 1.0 / p);
}

namespace {

double linf(const PersistencePair& a, const PersistencePair& b) {
  return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

double half_persistence(const PersistencePair& a) { return (a.death - a.birth) / 2.0; }

// Kuhn's augmenting-path matching on a dense bipartite graph.
class BipartiteMatcher {
 public:
  explicit BipartiteMatcher(std::size_t n) : n_(n), adj_(n * n, 0), match_right_(n), seen_(n) {}

  void set_edge(std::size_t l, std::size_t r, bool on) { adj_[l * n_ + r] = on; }

  bool perfect() {
    std::fill(match_right_.begin(), match_right_.end(), kFree);
    for (std::size_t l = 0; l < n_; ++l) {
      std::fill(seen_.begin(), seen_.end(), 0);
      if (!augment(l)) return false;
    }
    return true;
  }

 private:
  static constexpr std::size_t kFree = static_cast<std::size_t>(-1);

  bool augment(std::size_t l) {
    for (std::size_t r = 0; r < n_; ++r) {
      if (!adj_[l * n_ + r] || seen_[r]) continue;
      seen_[r] = 1;
      if (match_right_[r] == kFree || augment(match_right_[r])) {
        match_right_[r] = l;
        return true;
      }
    }
    return false;
  }

  std::size_t n_;
  std::vector<std::uint8_t> adj_;
  std::vector<std::size_t> match_right_;
  std::vector<std::uint8_t> seen_;
};

}  // namespace

double bottleneck_distance(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  const auto pa = positive_bars(a);
  const auto pb = positive_bars(b);
  const std::size_t na = pa.size();
  const std::size_t nb = pb.size();
  if (na == 0 && nb == 0) return 0.0;

  std::vector<double> candidates{0.0};
  for (const auto& x : pa) candidates.push_back(half_persistence(x));
  for (const auto& y : pb) candidates.push_back(half_persistence(y));
  for (const auto& x : pa)
    for (const auto& y : pb) candidates.push_back(linf(x, y));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // Left: points of a, then diagonal slots for b. Right: points of b, then
  // diagonal slots for a. Diagonal-to-diagonal costs nothing.
  const std::size_t n = na + nb;
  auto feasible = [&](double delta) {
    BipartiteMatcher m(n);
    for (std::size_t i = 0; i < na; ++i) {
      for (std::size_t j = 0; j < nb; ++j) m.set_edge(i, j, linf(pa[i], pb[j]) <= delta);
      m.set_edge(i, nb + i, half_persistence(pa[i]) <= delta);
    }
    for (std::size_t j = 0; j < nb; ++j) {
      m.set_edge(na + j, j, half_persistence(pb[j]) <= delta);
      for (std::size_t i = 0; i < na; ++i) m.set_edge(na + j, nb + i, true);
    }
    return m.perfect();
  };

  std::size_t lo = 0;
  std::size_t hi = candidates.size() - 1;  // everything to the diagonal always works
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (feasible(candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return candidates[lo];
}

std::vector<SampledCurve> landscape_layers(const PersistenceDiagram& d, std::size_t n_layers,
                                           std::size_t n_bins) {
  if (n_layers == 0) throw ParameterError("n_layers must be at least 1");
  if (n_bins == 0) throw ParameterError("n_bins must be positive");
  const auto bars = positive_bars(d);
  std::vector<SampledCurve> layers(n_layers);
  std::vector<double> x;
  if (bars.empty()) {
    x.assign(n_bins, 0.0);
  } else {
    double lo = bars.front().birth;
    double hi = bars.front().death;
    for (const auto& b : bars) {
      lo = std::min(lo, b.birth);
      hi = std::max(hi, b.death);
    }
    x = linspace(lo, hi, n_bins);
  }
  for (auto& layer : layers) {
    layer.x = x;
    layer.y.assign(n_bins, 0.0);
  }

  std::vector<double> tents(bars.size());
  for (std::size_t s = 0; s < n_bins && !bars.empty(); ++s) {
    for (std::size_t i = 0; i < bars.size(); ++i)
      tents[i] = std::max(0.0, std::min(x[s] - bars[i].birth, bars[i].death - x[s]));
    const std::size_t k = std::min(n_layers, tents.size());
    std::partial_sort(tents.begin(), tents.begin() + static_cast<std::ptrdiff_t>(k), tents.end(),
                      std::greater<>());
    for (std::size_t l = 0; l < k; ++l) layers[l].y[s] = tents[l];
  }
  return layers;
}

double landscape_amplitude(const PersistenceDiagram& d, const DescriptorParams& params) {
  params.validate();
  const auto layers = landscape_layers(d, params.n_layers, params.n_bins);
  const auto& x = layers.front().x;
  const double step = x.back() - x.front();
  if (step == 0.0) return 0.0;
  const double dx = step / static_cast<double>(x.size() - 1);
  double total = 0.0;
  for (const auto& layer : layers) {
    double integral = 0.0;
    for (std::size_t s = 0; s < layer.y.size(); ++s)
      integral += trapezoid_weight(s, layer.y.size()) * std::pow(layer.y[s], params.p);
    total += integral * dx;
  }
  return std::pow(total, 1.0 / params.p);
}

HeatGrid heat_kernel_grid(const PersistenceDiagram& d, double t, std::size_t n_bins) {
  if (!(t > 0.0)) throw ParameterError("heat parameter t must be > 0");
  if (n_bins < 2) throw ParameterError("n_bins must be at least 2");
  const auto bars = positive_bars(d);
  HeatGrid grid;
  if (bars.empty()) return grid;

  double bmin = bars.front().birth, bmax = bmin;
  double dmin = bars.front().death, dmax = dmin;
  for (const auto& b : bars) {
    bmin = std::min(bmin, b.birth);
    bmax = std::max(bmax, b.birth);
    dmin = std::min(dmin, b.death);
    dmax = std::max(dmax, b.death);
  }
  const double pad = 5.0 * std::sqrt(2.0 * t);
  grid.birth_axis = linspace(bmin - pad, bmax + pad, n_bins);
  grid.death_axis = linspace(dmin - pad, dmax + pad, n_bins);
  grid.values.assign(n_bins * n_bins, 0.0);

  // The Gaussian separates: exp(-(dx^2 + dy^2)/4t) = exp(-dx^2/4t) exp(-dy^2/4t),
  // so each bar is one rank-1 update of the grid.
  const double norm = 1.0 / (4.0 * std::numbers::pi * t);
  std::vector<double> row(n_bins);
  std::vector<double> col(n_bins);
  for (const auto& b : bars) {
    for (std::size_t i = 0; i < n_bins; ++i) {
      const double dx = grid.birth_axis[i] - b.birth;
      row[i] = norm * std::exp(-(dx * dx) / (4.0 * t));
    }
    for (std::size_t j = 0; j < n_bins; ++j) {
      const double dy = grid.death_axis[j] - b.death;
      col[j] = std::exp(-(dy * dy) / (4.0 * t));
    }
    simd::rank1_update(grid.values, row, col);
  }
  return grid;
}

double heat_amplitude(const PersistenceDiagram& d, const DescriptorParams& params) {
  params.validate();
  const HeatGrid grid = heat_kernel_grid(d, params.t, params.n_bins);
  if (grid.values.empty()) return 0.0;
  const std::size_t n = params.n_bins;
  const double dx = (grid.birth_axis.back() - grid.birth_axis.front()) / static_cast<double>(n - 1);
  const double dy = (grid.death_axis.back() - grid.death_axis.front()) / static_cast<double>(n - 1);
  double integral = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      row_sum += trapezoid_weight(j, n) * std::pow(std::abs(grid.values[i * n + j]), params.p);
    integral += trapezoid_weight(i, n) * row_sum;
  }
  return std::pow(integral * dx * dy, 1.0 / params.p);
}

double persistence_entropy(const PersistenceDiagram& d) {
  const auto bars = positive_bars(d);
  double total = 0.0;
  for (const auto& b : bars) total += b.persistence();
  if (total == 0.0) return 0.0;
  double entropy = 0.0;
  for (const auto& b : bars) {
    const double q = b.persistence() / total;
    entropy -= q * std::log(q);
  }
  return entropy + 0.0;  // no negative zero
}

DescriptorSet describe(const PersistenceDiagram& d, const DescriptorParams& params) {
  params.validate();
  const PersistenceDiagram scaled = scale_diagram(d);
  DescriptorSet out;
  out.heat_amplitude = heat_amplitude(scaled, params);
  out.betti_amplitude = betti_amplitude(scaled, params.p);
  out.bottleneck_amplitude = bottleneck_amplitude(scaled);
  out.wasserstein_amplitude = wasserstein_amplitude(scaled, params.p);
  out.landscape_amplitude = landscape_amplitude(scaled, params);
  // Dilation invariant; the unscaled lengths avoid rounding from the division.
  out.persistence_entropy = persistence_entropy(d);
  return out;
}

}  // namespace topofeat
