#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "topofeat/diagram_features.hpp"
#include "topofeat/filtration.hpp"
#include "topofeat/image.hpp"

namespace topofeat {

struct ThresholdSpec {
  double value = 0.5;
  ThresholdMode mode = ThresholdMode::keep_above;

  /// "le0p25" for keep-below 0.25, "ge0p75" for keep-above 0.75.
  std::string name() const;
  friend bool operator==(const ThresholdSpec&, const ThresholdSpec&) = default;
};

struct PipelineConfig {
  std::size_t channels = 3;  // every image must carry exactly this many
  std::size_t downsample_height = 32;
  std::size_t downsample_width = 32;
  ResampleMethod resample = ResampleMethod::area;

  std::vector<ThresholdSpec> thresholds{{0.25, ThresholdMode::keep_below},
                                        {0.75, ThresholdMode::keep_above}};
  std::vector<Direction> directions{Direction::up(), Direction::down(), Direction::left(),
                                    Direction::right()};
  std::vector<Center> centers{{8, 8}, {8, 24}, {24, 8}, {24, 24}};
  bool grayscale = true;
  std::vector<std::size_t> entropy_kernels{3, 5};
  std::size_t entropy_levels = 256;
  std::vector<GradientAxis> gradient_axes{GradientAxis::x, GradientAxis::y};

  DescriptorParams descriptors;
  std::vector<int> degrees{0};

  std::size_t csv_channels = 1;  // channel count for .csv rasters

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;
  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

enum class FiltrationKind { height, radial, grayscale, entropy, gradient };

/// One filtration applied to one channel, e.g. radial from (8, 24) on the
/// keep-above-0.75 mask.
struct FiltrationInstance {
  FiltrationKind kind = FiltrationKind::grayscale;
  std::size_t threshold = 0;  // index into cfg.thresholds (height, radial)
  std::size_t parameter = 0;  // direction, center, kernel or axis index
  std::string filtration;     // name token: height, radial, grayscale, entropy, gradient
  std::string param;          // name token: up_le0p25, r8c24_ge0p75, raw, k3, x
};

/// Per-channel instance list in output order: for each threshold the
/// heights then the radials, then grayscale, entropy kernels, gradient axes.
std::vector<FiltrationInstance> filtration_instances(const PipelineConfig& cfg);

/// Field for `instance` on a downsampled channel. Gradient fields are
/// shifted to start at zero.
FiltrationField compute_field(const FiltrationInstance& instance, const Channel& channel,
                              const PipelineConfig& cfg);

/// Finitized degree-`degree` diagram of a field, pairs sorted.
PersistenceDiagram field_diagram(const FiltrationField& field, int degree);

struct FeatureVector {
  std::vector<std::string> names;
  std::vector<double> values;
};

/// "ch{c}.{filtration}.{param}.H{d}.{descriptor}", channel-major.
std::vector<std::string> feature_names(const PipelineConfig& cfg);

/// channels x instances x degrees x 6.
std::size_t feature_count(const PipelineConfig& cfg);

FeatureVector extract(const ImageGrid& img, const PipelineConfig& cfg);

struct DatasetItem {
  std::filesystem::path path;
  std::string label;
};

struct FeatureRow {
  std::string path;
  std::string label;
  std::vector<double> values;
};

struct FailureRecord {
  std::string path;
  std::string label;
  std::string message;
};

struct FeatureMatrix {
  std::vector<std::string> names;
  std::vector<FeatureRow> rows;  // input order, failures skipped
  std::vector<FailureRecord> failures;
};

using ImageLoader = std::function<ImageGrid(const DatasetItem&)>;

/// Extracts every item on `workers` threads. A failing item (unreadable
/// file, bad dimensions) becomes a FailureRecord; the rest still run.
/// Throws EmptyInputError for an empty dataset.
FeatureMatrix extract_batch(std::span<const DatasetItem> dataset, const PipelineConfig& cfg,
                            std::size_t workers, const ImageLoader& loader = {});

/// In-memory variant; rows carry the label and an empty path.
FeatureMatrix extract_batch(std::span<const LabeledImage> dataset, const PipelineConfig& cfg,
                            std::size_t workers);

/// Class-named subdirectories of `root`, each holding images. Sorted by
/// class then file name. Throws EmptyInputError when nothing is found.
std::vector<DatasetItem> scan_dataset(const std::filesystem::path& root);

}  // namespace topofeat
