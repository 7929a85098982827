#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "topofeat/image.hpp"
#include "topofeat/persistence.hpp"

namespace topofeat {

// Every function here expects a finitized diagram and throws ParameterError
// on an essential (infinite) bar. Bars with death == birth are empty
// intervals: they never change a descriptor.

struct DescriptorParams {
  double p = 2.0;            // norm order for Betti, Wasserstein, landscape and heat
  double t = 0.1;            // heat-kernel diffusion time
  std::size_t n_bins = 100;  // samples per axis for landscape and heat integration
  std::size_t n_layers = 2;  // landscape layers

  void validate() const;
  friend bool operator==(const DescriptorParams&, const DescriptorParams&) = default;
};

struct DescriptorSet {
  double heat_amplitude = 0.0;
  double betti_amplitude = 0.0;
  double bottleneck_amplitude = 0.0;
  double wasserstein_amplitude = 0.0;
  double landscape_amplitude = 0.0;
  double persistence_entropy = 0.0;

  static constexpr std::array<std::string_view, 6> kNames = {
      "heat", "betti", "bottleneck", "wasserstein", "landscape", "entropy"};

  std::array<double, 6> values() const noexcept {
    return {heat_amplitude,        betti_amplitude,     bottleneck_amplitude,
            wasserstein_amplitude, landscape_amplitude, persistence_entropy};
  }
  friend bool operator==(const DescriptorSet&, const DescriptorSet&) = default;
};

/// Largest half-persistence, max (d - b) / 2; the divisor used by `scale_diagram`.
double scale_factor(const PersistenceDiagram& d);

/// Divides every coordinate by `scale_factor`; passes through when it is 0.
PersistenceDiagram scale_diagram(const PersistenceDiagram& d);

/// Number of half-open bars [b, d) containing x.
std::size_t betti_value(const PersistenceDiagram& d, double x);

struct SampledCurve {
  std::vector<double> x;
  std::vector<double> y;
};

/// Samples over [min birth, max death] of the positive-length bars; an
/// all-zero curve at x = 0 when there are none.
SampledCurve betti_curve(const PersistenceDiagram& d, std::size_t n_bins);

/// Exact L^p norm of the piecewise-constant Betti curve.
double betti_amplitude(const PersistenceDiagram& d, double p);

double bottleneck_amplitude(const PersistenceDiagram& d);

/// Exact bottleneck distance with the L-infinity ground norm: binary search
/// over candidate costs with a bipartite perfect-matching feasibility test.
double bottleneck_distance(const PersistenceDiagram& a, const PersistenceDiagram& b);

/// (sum ((d - b) / 2)^p)^(1/p).
double wasserstein_amplitude(const PersistenceDiagram& d, double p);

/// Layers 1..n_layers sampled on n_bins points over [min birth, max death].
std::vector<SampledCurve> landscape_layers(const PersistenceDiagram& d, std::size_t n_layers,
                                           std::size_t n_bins);

/// (sum_k integral lambda_k^p)^(1/p), trapezoidal rule on the sample grid.
double landscape_amplitude(const PersistenceDiagram& d, const DescriptorParams& params);

struct HeatGrid {
  std::vector<double> birth_axis;  // x, rows of `values`
  std::vector<double> death_axis;  // y, columns of `values`
  std::vector<double> values;      // row-major n x n, empty when no bars
};

/// Sum of Gaussians exp(-||x - (b, d)||^2 / 4t) / (4 pi t) sampled on an
/// n_bins x n_bins grid over the bars' bounding box padded by 5 sqrt(2t).
HeatGrid heat_kernel_grid(const PersistenceDiagram& d, double t, std::size_t n_bins);

/// L^p norm of the heat kernel grid, 2D trapezoidal rule.
double heat_amplitude(const PersistenceDiagram& d, const DescriptorParams& params);

/// Shannon entropy (natural log) of bar lengths normalized by their sum.
double persistence_entropy(const PersistenceDiagram& d);

/// Scales the diagram, then computes the six descriptors.
DescriptorSet describe(const PersistenceDiagram& d, const DescriptorParams& params);

}  // namespace topofeat
