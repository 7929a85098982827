#include "topofeat/config.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "topofeat/format.hpp"

namespace topofeat {

namespace {

void check_keys(const YAML::Node& node, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!node.IsMap()) throw ConfigError(where + " must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& where) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("bad value for " + where);
  }
}

std::size_t positive(const YAML::Node& node, const std::string& where) {
  const auto v = scalar<long long>(node, where);
  if (v <= 0) throw ConfigError(where + " must be positive");
  return static_cast<std::size_t>(v);
}

Direction parse_direction(const YAML::Node& node) {
  if (node.IsScalar()) {
    const auto name = node.as<std::string>();
    if (name == "up") return Direction::up();
    if (name == "down") return Direction::down();
    if (name == "left") return Direction::left();
    if (name == "right") return Direction::right();
    throw ConfigError("unknown direction '" + name + "'");
  }
  if (!node.IsSequence() || node.size() != 2)
    throw ConfigError("direction must be a name or a [row, col] pair");
  try {
    return Direction(scalar<double>(node[0], "direction"), scalar<double>(node[1], "direction"));
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
}

PipelineConfig from_node(const YAML::Node& root) {
  PipelineConfig cfg;
  if (!root || root.IsNull()) return cfg;
  check_keys(root, "config",
             {"input", "downsample", "thresholds", "height", "radial", "grayscale", "entropy",
              "gradient", "descriptors", "homology"});

  if (auto n = root["input"]) {
    check_keys(n, "input", {"channels", "csv_channels"});
    if (n["channels"]) cfg.channels = positive(n["channels"], "input.channels");
    if (n["csv_channels"]) cfg.csv_channels = positive(n["csv_channels"], "input.csv_channels");
  }
  if (auto n = root["downsample"]) {
    check_keys(n, "downsample", {"height", "width", "method"});
    if (n["height"]) cfg.downsample_height = positive(n["height"], "downsample.height");
    if (n["width"]) cfg.downsample_width = positive(n["width"], "downsample.width");
    if (n["method"]) {
      const auto m = scalar<std::string>(n["method"], "downsample.method");
      if (m == "area") {
        cfg.resample = ResampleMethod::area;
      } else if (m == "bilinear") {
        cfg.resample = ResampleMethod::bilinear;
      } else {
        throw ConfigError("downsample.method must be area or bilinear");
      }
    }
  }
  if (auto n = root["thresholds"]) {
    if (!n.IsSequence()) throw ConfigError("thresholds must be a list");
    cfg.thresholds.clear();
    for (const auto& t : n) {
      check_keys(t, "thresholds entry", {"value", "mode"});
      ThresholdSpec spec;
      spec.value = scalar<double>(t["value"], "thresholds.value");
      const auto mode = scalar<std::string>(t["mode"], "thresholds.mode");
      if (mode == "above") {
        spec.mode = ThresholdMode::keep_above;
      } else if (mode == "below") {
        spec.mode = ThresholdMode::keep_below;
      } else {
        throw ConfigError("thresholds.mode must be above or below");
      }
      cfg.thresholds.push_back(spec);
    }
  }
  if (auto n = root["height"]) {
    check_keys(n, "height", {"directions"});
    if (auto d = n["directions"]) {
      if (!d.IsSequence()) throw ConfigError("height.directions must be a list");
      cfg.directions.clear();
      for (const auto& v : d) cfg.directions.push_back(parse_direction(v));
    }
  }
  if (auto n = root["radial"]) {
    check_keys(n, "radial", {"centers"});
    if (auto c = n["centers"]) {
      if (!c.IsSequence()) throw ConfigError("radial.centers must be a list");
      cfg.centers.clear();
      for (const auto& v : c) {
        if (!v.IsSequence() || v.size() != 2) throw ConfigError("center must be a [row, col] pair");
        cfg.centers.push_back({scalar<double>(v[0], "center"), scalar<double>(v[1], "center")});
      }
    }
  }
  if (auto n = root["grayscale"]) {
    check_keys(n, "grayscale", {"enabled"});
    if (n["enabled"]) cfg.grayscale = scalar<bool>(n["enabled"], "grayscale.enabled");
  }
  if (auto n = root["entropy"]) {
    check_keys(n, "entropy", {"kernels", "levels"});
    if (auto k = n["kernels"]) {
      if (!k.IsSequence()) throw ConfigError("entropy.kernels must be a list");
      cfg.entropy_kernels.clear();
      for (const auto& v : k) cfg.entropy_kernels.push_back(positive(v, "entropy.kernels"));
    }
    if (n["levels"]) cfg.entropy_levels = positive(n["levels"], "entropy.levels");
  }
  if (auto n = root["gradient"]) {
    check_keys(n, "gradient", {"axes"});
    if (auto a = n["axes"]) {
      if (!a.IsSequence()) throw ConfigError("gradient.axes must be a list");
      cfg.gradient_axes.clear();
      for (const auto& v : a) {
        const auto axis = scalar<std::string>(v, "gradient.axes");
        if (axis == "x") {
          cfg.gradient_axes.push_back(GradientAxis::x);
        } else if (axis == "y") {
          cfg.gradient_axes.push_back(GradientAxis::y);
        } else {
          throw ConfigError("gradient axes must be x or y");
        }
      }
    }
  }
  if (auto n = root["descriptors"]) {
    check_keys(n, "descriptors", {"p", "t", "n_bins", "n_layers"});
    if (n["p"]) cfg.descriptors.p = scalar<double>(n["p"], "descriptors.p");
    if (n["t"]) cfg.descriptors.t = scalar<double>(n["t"], "descriptors.t");
    if (n["n_bins"]) cfg.descriptors.n_bins = positive(n["n_bins"], "descriptors.n_bins");
    if (n["n_layers"]) cfg.descriptors.n_layers = positive(n["n_layers"], "descriptors.n_layers");
  }
  if (auto n = root["homology"]) {
    check_keys(n, "homology", {"degrees"});
    if (auto d = n["degrees"]) {
      if (!d.IsSequence()) throw ConfigError("homology.degrees must be a list");
      cfg.degrees.clear();
      for (const auto& v : d) cfg.degrees.push_back(scalar<int>(v, "homology.degrees"));
    }
  }
  cfg.validate();
  return cfg;
}

std::string direction_text(const Direction& d) {
  const std::string name = d.name();
  if (name == "up" || name == "down" || name == "left" || name == "right") return name;
  return "[" + format_real(d.row()) + ", " + format_real(d.col()) + "]";
}

}  // namespace

PipelineConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return from_node(root);
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string emit_config(const PipelineConfig& cfg, bool with_comments) {
  std::ostringstream out;
  auto comment = [&](const char* text) {
    if (with_comments) out << text;
  };
  comment(
      "# topofeat pipeline configuration.\n"
      "# Coordinates are (row, col) with the origin at the top-left pixel.\n\n");
  comment("# Every image must have this many channels. csv_channels applies to .csv rasters.\n");
  out << "input:\n  channels: " << cfg.channels << "\n  csv_channels: " << cfg.csv_channels
      << "\n";
  comment("\n# Images are reduced to this size before any filtration. method: area | bilinear\n");
  out << "downsample:\n  height: " << cfg.downsample_height << "\n  width: "
      << cfg.downsample_width << "\n  method: "
      << (cfg.resample == ResampleMethod::area ? "area" : "bilinear") << "\n";
  comment(
      "\n# Binary masks for the height and radial filtrations, ascending by value.\n"
      "# mode below keeps pixels <= value, above keeps pixels >= value.\n");
  out << "thresholds:";
  if (cfg.thresholds.empty()) out << " []";
  out << "\n";
  for (const auto& t : cfg.thresholds)
    out << "  - value: " << format_real(t.value)
        << "\n    mode: " << (t.mode == ThresholdMode::keep_below ? "below" : "above") << "\n";
  comment("\n# Height filtration directions: up, down, left, right or a unit [row, col] vector.\n");
  out << "height:\n  directions: [";
  for (std::size_t i = 0; i < cfg.directions.size(); ++i)
    out << (i ? ", " : "") << direction_text(cfg.directions[i]);
  out << "]\n";
  comment("\n# Radial filtration centers; the defaults are the quadrant centers of 32x32.\n");
  out << "radial:\n  centers: [";
  for (std::size_t i = 0; i < cfg.centers.size(); ++i)
    out << (i ? ", " : "") << "[" << format_real(cfg.centers[i].row) << ", "
        << format_real(cfg.centers[i].col) << "]";
  out << "]\n";
  comment("\n# Raw channel intensities as the filtration.\n");
  out << "grayscale:\n  enabled: " << (cfg.grayscale ? "true" : "false") << "\n";
  comment(
      "\n# Local entropy over k x k windows; intensities are quantized to `levels` bins first.\n");
  out << "entropy:\n  kernels: [";
  for (std::size_t i = 0; i < cfg.entropy_kernels.size(); ++i)
    out << (i ? ", " : "") << cfg.entropy_kernels[i];
  out << "]\n  levels: " << cfg.entropy_levels << "\n";
  comment("\n# Sobel gradient axes.\n");
  out << "gradient:\n  axes: [";
  for (std::size_t i = 0; i < cfg.gradient_axes.size(); ++i)
    out << (i ? ", " : "") << (cfg.gradient_axes[i] == GradientAxis::x ? "x" : "y");
  out << "]\n";
  comment(
      "\n# p: norm order (Betti, Wasserstein, landscape, heat). t: heat-kernel time.\n"
      "# n_bins: samples per axis for landscape and heat. n_layers: landscape layers.\n");
  out << "descriptors:\n  p: " << format_real(cfg.descriptors.p)
      << "\n  t: " << format_real(cfg.descriptors.t) << "\n  n_bins: " << cfg.descriptors.n_bins
      << "\n  n_layers: " << cfg.descriptors.n_layers << "\n";
  comment("\n# Homology degrees; degree 1 uses the exact matrix reduction and is slower.\n");
  out << "homology:\n  degrees: [";
  for (std::size_t i = 0; i < cfg.degrees.size(); ++i) out << (i ? ", " : "") << cfg.degrees[i];
  out << "]\n";
  return out.str();
}

std::string config_hash(const PipelineConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : emit_config(cfg, false)) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace topofeat
