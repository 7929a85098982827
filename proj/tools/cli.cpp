#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <algorithm>

#include <CLI11.hpp>
#include <json.hpp>

#include "topofeat/config.hpp"
#include "topofeat/feature_io.hpp"
#include "topofeat/format.hpp"
#include "topofeat/image_io.hpp"
#include "topofeat/pipeline.hpp"
#include "topofeat/simd/kernels.hpp"
#include "topofeat/version.hpp"

namespace topofeat::cli {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t default_workers() {
  if (const char* env = std::getenv("TOPOFEAT_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 1;
}

PipelineConfig config_or_default(const std::string& path) {
  if (path.empty()) return PipelineConfig{};
  if (!fs::is_regular_file(path)) throw UsageError("config file not found: " + path);
  try {
    return load_config(path);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

// Writes through a sibling temp file so a failed run never leaves a
// half-written output behind.
template <class Fn>
void write_atomically(const fs::path& path, std::ios::openmode mode, Fn&& fn) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, mode);
    if (!out) throw IoError("cannot write " + path.string());
    fn(out);
    if (!out) throw IoError("failed writing " + path.string());
  }
  fs::rename(tmp, path);
}

// ---------------------------------------------------------------- extract

struct ExtractArgs {
  std::string dataset;
  std::string config;
  std::string out;
  std::string format = "csv";
  std::size_t workers = 1;
  bool keep_partial = false;
};

int cmd_extract(const ExtractArgs& a, std::ostream& out, std::ostream& err) {
  if (!fs::is_directory(a.dataset)) throw UsageError("dataset directory not found: " + a.dataset);
  const PipelineConfig cfg = config_or_default(a.config);
  std::vector<DatasetItem> items;
  try {
    items = scan_dataset(a.dataset);
  } catch (const EmptyInputError& e) {
    throw UsageError(e.what());
  }

  const auto start = std::chrono::steady_clock::now();
  const FeatureMatrix matrix = extract_batch(items, cfg, a.workers);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const bool failed = !matrix.failures.empty();
  if (!failed || a.keep_partial) {
    if (a.format == "csv") {
      write_atomically(a.out, std::ios::binary, [&](std::ostream& o) { write_feature_csv(o, matrix); });
    } else {
      write_atomically(a.out, std::ios::binary,
                       [&](std::ostream& o) { write_feature_columnar(o, matrix); });
    }
  }

  nlohmann::ordered_json manifest;
  manifest["config_hash"] = config_hash(cfg);
  manifest["tool_version"] = std::string(kVersion);
  manifest["simd"] = simd::to_string(simd::active_isa());
  manifest["input_count"] = items.size();
  manifest["row_count"] = matrix.rows.size();
  manifest["failure_count"] = matrix.failures.size();
  manifest["wall_time_seconds"] = seconds;
  manifest["output_written"] = !failed || a.keep_partial;
  manifest["failures"] = nlohmann::json::array();
  for (const auto& f : matrix.failures)
    manifest["failures"].push_back({{"path", f.path}, {"label", f.label}, {"error", f.message}});
  write_atomically(a.out + ".manifest.json", std::ios::binary,
                   [&](std::ostream& o) { o << manifest.dump(2) << '\n'; });

  for (const auto& f : matrix.failures) err << "failed: " << f.path << ": " << f.message << '\n';
  out << matrix.rows.size() << " rows, " << matrix.failures.size() << " failures -> "
      << (failed && !a.keep_partial ? "(no output written)" : a.out) << '\n';
  return failed ? kPartialFailure : kOk;
}

// ------------------------------------------------------------------ stats

int cmd_stats(const std::string& dataset, const std::string& out_path, std::size_t csv_channels,
              std::ostream& out, std::ostream& err) {
  if (!fs::is_directory(dataset)) throw UsageError("dataset directory not found: " + dataset);
  std::vector<DatasetItem> items;
  try {
    items = scan_dataset(dataset);
  } catch (const EmptyInputError& e) {
    throw UsageError(e.what());
  }

  ClassStatsAccumulator acc;
  std::size_t failures = 0;
  for (const auto& item : items) {
    try {
      acc.add(item.label, load_image(item.path, LoadOptions{csv_channels}));
    } catch (const Error& e) {
      err << "failed: " << item.path.string() << ": " << e.what() << '\n';
      ++failures;
    }
  }
  if (acc.empty()) throw UsageError("no readable images in " + dataset);

  auto emit = [&](std::ostream& o) {
    o << "class,channel,mean,sd,n\n";
    for (const ClassStats& s : acc.result())
      for (std::size_t c = 0; c < s.mean.size(); ++c)
        o << s.label << ',' << c << ',' << format_real(s.mean[c]) << ',' << format_real(s.sd[c])
          << ',' << s.count << '\n';
  };
  if (out_path.empty()) {
    emit(out);
  } else {
    write_atomically(out_path, std::ios::binary, emit);
  }
  return failures ? kPartialFailure : kOk;
}

// ---------------------------------------------------------------- inspect

struct InspectArgs {
  std::string image;
  std::string config;
  std::string stage;
  std::string filtration;  // "{filtration}.{param}"; empty selects all
  std::optional<std::size_t> channel;
  std::optional<int> degree;
  std::string out_dir = ".";
  bool native = false;
};

void write_filtration_csv(std::ostream& o, const FiltrationField& f) {
  for (std::size_t r = 0; r < f.height(); ++r) {
    for (std::size_t c = 0; c < f.width(); ++c) o << (c ? "," : "") << format_real(f(r, c));
    o << '\n';
  }
}

int cmd_inspect(const InspectArgs& a, std::ostream& out) {
  static const std::vector<std::string> kStages = {"filtration", "diagram", "betti", "landscape",
                                                   "heat"};
  if (std::find(kStages.begin(), kStages.end(), a.stage) == kStages.end())
    throw UsageError("unknown stage '" + a.stage +
                     "' (filtration, diagram, betti, landscape, heat)");
  if (!fs::is_regular_file(a.image)) throw UsageError("image not found: " + a.image);
  PipelineConfig cfg = config_or_default(a.config);

  ImageGrid img = load_image(a.image, LoadOptions{cfg.csv_channels});
  if (!a.native) img = downsample(img, cfg.downsample_height, cfg.downsample_width, cfg.resample);

  std::vector<std::size_t> channels;
  if (a.channel) {
    if (*a.channel >= img.channels())
      throw UsageError("channel " + std::to_string(*a.channel) + " out of range");
    channels.push_back(*a.channel);
  } else {
    for (std::size_t c = 0; c < img.channels(); ++c) channels.push_back(c);
  }
  std::vector<int> degrees = cfg.degrees;
  if (a.degree) {
    if (*a.degree != 0 && *a.degree != 1) throw UsageError("degree must be 0 or 1");
    degrees = {*a.degree};
  }

  std::vector<FiltrationInstance> instances;
  for (const auto& inst : filtration_instances(cfg))
    if (a.filtration.empty() || a.filtration == inst.filtration + "." + inst.param)
      instances.push_back(inst);
  if (instances.empty()) throw UsageError("no filtration instance named '" + a.filtration + "'");

  fs::create_directories(a.out_dir);
  for (std::size_t c : channels) {
    const Channel channel = select_channel(img, c);
    for (const auto& inst : instances) {
      const std::string stem =
          "ch" + std::to_string(c) + "." + inst.filtration + "." + inst.param + "." + a.stage;
      const fs::path path = fs::path(a.out_dir) / (stem + ".csv");
      FiltrationField field;
      try {
        field = compute_field(inst, channel, cfg);
      } catch (const Error& e) {
        rethrow_with_context(e, stem);
      }

      write_atomically(path, std::ios::binary, [&](std::ostream& o) {
        if (a.stage == "filtration") {
          write_filtration_csv(o, field);
          return;
        }
        if (a.stage == "diagram") o << "degree,birth,death\n";
        if (a.stage == "betti") o << "degree,x,betti\n";
        if (a.stage == "landscape") o << "degree,layer,x,value\n";
        if (a.stage == "heat") o << "degree,birth,death,value\n";
        for (int d : degrees) {
          const PersistenceDiagram diagram = field_diagram(field, d);
          if (a.stage == "diagram") {
            for (const auto& p : diagram.pairs)
              o << d << ',' << format_real(p.birth) << ',' << format_real(p.death) << '\n';
            continue;
          }
          const PersistenceDiagram scaled = scale_diagram(diagram);
          if (a.stage == "betti") {
            const SampledCurve curve = betti_curve(scaled, cfg.descriptors.n_bins);
            for (std::size_t i = 0; i < curve.x.size(); ++i)
              o << d << ',' << format_real(curve.x[i]) << ',' << format_real(curve.y[i]) << '\n';
          } else if (a.stage == "landscape") {
            const auto layers =
                landscape_layers(scaled, cfg.descriptors.n_layers, cfg.descriptors.n_bins);
            for (std::size_t l = 0; l < layers.size(); ++l)
              for (std::size_t i = 0; i < layers[l].x.size(); ++i)
                o << d << ',' << l + 1 << ',' << format_real(layers[l].x[i]) << ','
                  << format_real(layers[l].y[i]) << '\n';
          } else {
            const HeatGrid grid = heat_kernel_grid(scaled, cfg.descriptors.t, cfg.descriptors.n_bins);
            const std::size_t n = grid.birth_axis.size();
            for (std::size_t i = 0; i < n; ++i)
              for (std::size_t j = 0; j < n; ++j)
                o << d << ',' << format_real(grid.birth_axis[i]) << ','
                  << format_real(grid.death_axis[j]) << ',' << format_real(grid.values[i * n + j])
                  << '\n';
          }
        }
      });
      out << path.string() << '\n';
    }
  }
  return kOk;
}

// ----------------------------------------------------------------- config

int cmd_config_init(const std::string& out_path, std::ostream& out) {
  const std::string text = emit_config(PipelineConfig{}, true);
  if (out_path.empty()) {
    out << text;
  } else {
    write_atomically(out_path, std::ios::binary, [&](std::ostream& o) { o << text; });
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Topological feature vectors from raster images"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  ExtractArgs ex;
  ex.workers = default_workers();
  auto* extract = app.add_subcommand("extract", "Extract the feature matrix of a dataset");
  extract->add_option("dataset", ex.dataset, "Directory with one subdirectory per class")
      ->required();
  extract->add_option("--config", ex.config, "Pipeline config (YAML); defaults if omitted");
  extract->add_option("--out", ex.out, "Output feature file")->required();
  extract->add_option("--workers", ex.workers, "Worker threads (env TOPOFEAT_WORKERS)")
      ->check(CLI::PositiveNumber);
  extract->add_option("--format", ex.format, "Output format")
      ->check(CLI::IsMember({"csv", "bin"}));
  extract->add_flag("--keep-partial", ex.keep_partial,
                    "Write the rows that succeeded even when some images failed");

  std::string stats_dataset, stats_out;
  std::size_t stats_csv_channels = 1;
  auto* stats = app.add_subcommand("stats", "Per-class channel mean and standard deviation");
  stats->add_option("dataset", stats_dataset, "Directory with one subdirectory per class")
      ->required();
  stats->add_option("--out", stats_out, "Output CSV (stdout if omitted)");
  stats->add_option("--csv-channels", stats_csv_channels, "Channels in .csv rasters")
      ->check(CLI::PositiveNumber);

  InspectArgs in;
  auto* inspect = app.add_subcommand("inspect", "Dump intermediate stages as CSV");
  inspect->add_option("image", in.image, "Input image")->required();
  inspect->add_option("--stage", in.stage, "filtration | diagram | betti | landscape | heat")
      ->required();
  inspect->add_option("--config", in.config, "Pipeline config (YAML)");
  inspect->add_option("--filtration", in.filtration, "Instance, e.g. entropy.k3 (default: all)");
  inspect->add_option("--channel", in.channel, "Channel index (default: all)");
  inspect->add_option("--degree", in.degree, "Homology degree (default: config)");
  inspect->add_option("--out", in.out_dir, "Output directory");
  inspect->add_flag("--native", in.native, "Skip downsampling");

  std::string config_out;
  auto* config = app.add_subcommand("config", "Configuration helpers");
  config->require_subcommand(1);
  auto* init = config->add_subcommand("init", "Write the default configuration");
  init->add_option("--out", config_out, "Destination (stdout if omitted)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*extract) return cmd_extract(ex, out, err);
    if (*stats) return cmd_stats(stats_dataset, stats_out, stats_csv_channels, out, err);
    if (*inspect) return cmd_inspect(in, out);
    if (*init) return cmd_config_init(config_out, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return e.kind() == ErrorKind::config || e.kind() == ErrorKind::parameter ||
                   e.kind() == ErrorKind::dimension || e.kind() == ErrorKind::index
               ? kUsageError
               : kPartialFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kPartialFailure;
  }
  return kUsageError;
}

}  // namespace topofeat::cli
