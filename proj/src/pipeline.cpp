#include "topofeat/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <thread>

#include "topofeat/format.hpp"
#include "topofeat/image_io.hpp"
#include "topofeat/persistence.hpp"

namespace topofeat {

namespace {

std::string token(double v) {
  std::string s = format_real(v);
  for (char& ch : s) {
    if (ch == '.') ch = 'p';
    if (ch == '-') ch = 'm';
  }
  return s;
}

const char* axis_name(GradientAxis axis) { return axis == GradientAxis::x ? "x" : "y"; }

}  // namespace

std::string ThresholdSpec::name() const {
  return (mode == ThresholdMode::keep_below ? "le" : "ge") + token(value);
}

void PipelineConfig::validate() const {
  if (channels == 0) throw ConfigError("channels must be positive");
  if (downsample_height == 0 || downsample_width == 0)
    throw ConfigError("downsample size must be positive");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const double v = thresholds[i].value;
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("threshold " + format_real(v) + " outside [0,1]");
    if (i > 0 && v < thresholds[i - 1].value)
      throw ConfigError("thresholds must be sorted ascending");
  }
  for (const Center& c : centers) {
    if (!(c.row >= 0.0 && c.row <= static_cast<double>(downsample_height - 1) && c.col >= 0.0 &&
          c.col <= static_cast<double>(downsample_width - 1)))
      throw ConfigError("center (" + format_real(c.row) + ", " + format_real(c.col) +
                        ") outside the downsampled image");
  }
  for (std::size_t k : entropy_kernels) {
    if (k % 2 == 0) throw ConfigError("entropy kernel sizes must be odd");
    if (k > std::min(downsample_height, downsample_width))
      throw ConfigError("entropy kernel larger than the downsampled image");
  }
  if (entropy_levels < 2) throw ConfigError("entropy levels must be at least 2");
  if (!gradient_axes.empty() && (downsample_height < 3 || downsample_width < 3))
    throw ConfigError("gradient filtration needs a downsampled size of at least 3x3");
  if (degrees.empty()) throw ConfigError("at least one homology degree is required");
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] != 0 && degrees[i] != 1) throw ConfigError("degrees must be 0 or 1");
    for (std::size_t j = 0; j < i; ++j)
      if (degrees[j] == degrees[i]) throw ConfigError("duplicate homology degree");
  }
  try {
    descriptors.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("descriptors: ") + e.what());
  }
  if (csv_channels == 0) throw ConfigError("csv channel count must be positive");
  if (filtration_instances(*this).empty()) throw ConfigError("no filtration enabled");
}

std::vector<FiltrationInstance> filtration_instances(const PipelineConfig& cfg) {
  std::vector<FiltrationInstance> out;
  for (std::size_t t = 0; t < cfg.thresholds.size(); ++t) {
    const std::string suffix = "_" + cfg.thresholds[t].name();
    for (std::size_t i = 0; i < cfg.directions.size(); ++i)
      out.push_back({FiltrationKind::height, t, i, "height", cfg.directions[i].name() + suffix});
    for (std::size_t i = 0; i < cfg.centers.size(); ++i)
      out.push_back({FiltrationKind::radial, t, i, "radial", cfg.centers[i].name() + suffix});
  }
  if (cfg.grayscale) out.push_back({FiltrationKind::grayscale, 0, 0, "grayscale", "raw"});
  for (std::size_t i = 0; i < cfg.entropy_kernels.size(); ++i)
    out.push_back({FiltrationKind::entropy, 0, i, "entropy",
                   "k" + std::to_string(cfg.entropy_kernels[i])});
  for (std::size_t i = 0; i < cfg.gradient_axes.size(); ++i)
    out.push_back({FiltrationKind::gradient, 0, i, "gradient", axis_name(cfg.gradient_axes[i])});
  return out;
}

FiltrationField compute_field(const FiltrationInstance& instance, const Channel& channel,
                              const PipelineConfig& cfg) {
  switch (instance.kind) {
    case FiltrationKind::height: {
      const ThresholdSpec& t = cfg.thresholds.at(instance.threshold);
      return height_filtration(binarize(channel, t.value, t.mode),
                               cfg.directions.at(instance.parameter));
    }
    case FiltrationKind::radial: {
      const ThresholdSpec& t = cfg.thresholds.at(instance.threshold);
      return radial_filtration(binarize(channel, t.value, t.mode),
                               cfg.centers.at(instance.parameter));
    }
    case FiltrationKind::grayscale:
      return grayscale_filtration(channel);
    case FiltrationKind::entropy:
      return local_entropy_filtration(channel, cfg.entropy_kernels.at(instance.parameter),
                                      cfg.entropy_levels);
    case FiltrationKind::gradient:
      return shift_to_nonnegative(
          gradient_filtration(channel, cfg.gradient_axes.at(instance.parameter)));
  }
  throw ParameterError("unknown filtration kind");
}

PersistenceDiagram field_diagram(const FiltrationField& field, int degree) {
  PersistenceDiagram raw = degree == 0 ? persistence_h0(field)
                                       : persistence_oracle(build_complex(field), degree);
  return finitize(raw, field.max_value()).sorted();
}

std::vector<std::string> feature_names(const PipelineConfig& cfg) {
  const auto instances = filtration_instances(cfg);
  std::vector<std::string> names;
  names.reserve(feature_count(cfg));
  for (std::size_t c = 0; c < cfg.channels; ++c)
    for (const auto& inst : instances)
      for (int d : cfg.degrees)
        for (std::string_view desc : DescriptorSet::kNames)
          names.push_back("ch" + std::to_string(c) + "." + inst.filtration + "." + inst.param +
                          ".H" + std::to_string(d) + "." + std::string(desc));
  return names;
}

std::size_t feature_count(const PipelineConfig& cfg) {
  return cfg.channels * filtration_instances(cfg).size() * cfg.degrees.size() *
         DescriptorSet::kNames.size();
}

FeatureVector extract(const ImageGrid& img, const PipelineConfig& cfg) {
  cfg.validate();
  if (img.channels() != cfg.channels)
    throw DimensionError("image has " + std::to_string(img.channels()) +
                         " channels, config expects " + std::to_string(cfg.channels));
  const ImageGrid small =
      downsample(img, cfg.downsample_height, cfg.downsample_width, cfg.resample);
  const auto instances = filtration_instances(cfg);

  FeatureVector out;
  out.names = feature_names(cfg);
  out.values.reserve(out.names.size());
  const bool need_h1 = std::find(cfg.degrees.begin(), cfg.degrees.end(), 1) != cfg.degrees.end();

  for (std::size_t c = 0; c < cfg.channels; ++c) {
    const Channel channel = select_channel(small, c);
    for (const auto& inst : instances) {
      try {
        const FiltrationField field = compute_field(inst, channel, cfg);
        std::optional<PersistenceDiagram> h1;
        if (need_h1) {
          auto all = persistence_oracle_all(build_complex(field));
          h1 = finitize(all[1], field.max_value()).sorted();
        }
        for (int d : cfg.degrees) {
          const PersistenceDiagram diagram = d == 0 ? field_diagram(field, 0) : *h1;
          const auto values = describe(diagram, cfg.descriptors).values();
          out.values.insert(out.values.end(), values.begin(), values.end());
        }
      } catch (const Error& e) {
        rethrow_with_context(e, "ch" + std::to_string(c) + "." + inst.filtration + "." + inst.param);
      }
    }
  }
  return out;
}

namespace {

struct BatchSlot {
  std::optional<std::vector<double>> values;
  std::string error;
};

// Runs job(i) for i in [0, n) on up to `workers` threads. Results land in
// their input slot, so scheduling never affects output order.
std::vector<BatchSlot> run_batch(std::size_t n, std::size_t workers,
                                 const std::function<std::vector<double>(std::size_t)>& job) {
  std::vector<BatchSlot> slots(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        slots[i].values = job(i);
      } catch (const std::exception& e) {
        slots[i].error = e.what();
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(workers, 1, n);
  if (n_threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(work);
  }
  return slots;
}

}  // namespace

FeatureMatrix extract_batch(std::span<const DatasetItem> dataset, const PipelineConfig& cfg,
                            std::size_t workers, const ImageLoader& loader) {
  if (dataset.empty()) throw EmptyInputError("dataset is empty");
  cfg.validate();
  const ImageLoader load = loader ? loader : [&cfg](const DatasetItem& item) {
    return load_image(item.path, LoadOptions{cfg.csv_channels});
  };
  auto slots = run_batch(dataset.size(), workers,
                         [&](std::size_t i) { return extract(load(dataset[i]), cfg).values; });

  FeatureMatrix matrix;
  matrix.names = feature_names(cfg);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (slots[i].values) {
      matrix.rows.push_back(
          {dataset[i].path.string(), dataset[i].label, std::move(*slots[i].values)});
    } else {
      matrix.failures.push_back({dataset[i].path.string(), dataset[i].label, slots[i].error});
    }
  }
  return matrix;
}

FeatureMatrix extract_batch(std::span<const LabeledImage> dataset, const PipelineConfig& cfg,
                            std::size_t workers) {
  if (dataset.empty()) throw EmptyInputError("dataset is empty");
  cfg.validate();
  auto slots = run_batch(dataset.size(), workers,
                         [&](std::size_t i) { return extract(dataset[i].image, cfg).values; });
  FeatureMatrix matrix;
  matrix.names = feature_names(cfg);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (slots[i].values) {
      matrix.rows.push_back({"", dataset[i].label, std::move(*slots[i].values)});
    } else {
      matrix.failures.push_back({"", dataset[i].label, slots[i].error});
    }
  }
  return matrix;
}

std::vector<DatasetItem> scan_dataset(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw IoError("not a directory: " + root.string());
  std::vector<DatasetItem> items;
  for (const auto& cls : fs::directory_iterator(root)) {
    if (!cls.is_directory()) continue;
    for (const auto& file : fs::directory_iterator(cls.path())) {
      if (file.is_regular_file() && is_supported_image(file.path()))
        items.push_back({file.path(), cls.path().filename().string()});
    }
  }
  if (items.empty()) throw EmptyInputError("no images under " + root.string());
  std::sort(items.begin(), items.end(), [](const DatasetItem& a, const DatasetItem& b) {
    if (a.label != b.label) return a.label < b.label;
    return a.path.filename().string() < b.path.filename().string();
  });
  return items;
}

}  // namespace topofeat
