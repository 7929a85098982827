#include "topofeat/image.hpp"

#include <algorithm>
#include <cmath>

namespace topofeat {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::dimension: return "dimension error";
    case ErrorKind::index: return "index error";
    case ErrorKind::parameter: return "parameter error";
    case ErrorKind::empty_input: return "empty input";
    case ErrorKind::resource: return "resource error";
    case ErrorKind::io: return "i/o error";
    case ErrorKind::config: return "config error";
  }
  return "error";
}

void rethrow_with_context(const Error& e, const std::string& context) {
  const std::string msg = context + ": " + e.what();
  switch (e.kind()) {
    case ErrorKind::dimension: throw DimensionError(msg);
    case ErrorKind::index: throw IndexError(msg);
    case ErrorKind::parameter: throw ParameterError(msg);
    case ErrorKind::empty_input: throw EmptyInputError(msg);
    case ErrorKind::resource: throw ResourceError(msg);
    case ErrorKind::io: throw IoError(msg);
    case ErrorKind::config: throw ConfigError(msg);
  }
  throw Error(e.kind(), msg);
}

ImageGrid::ImageGrid(std::size_t height, std::size_t width, std::size_t channels,
                     std::vector<double> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
  if (height == 0 || width == 0 || channels == 0)
    throw DimensionError("image dimensions must be positive");
  if (data_.size() != height * width * channels)
    throw DimensionError("image data length " + std::to_string(data_.size()) +
                         " does not match " + std::to_string(height) + "x" +
                         std::to_string(width) + "x" + std::to_string(channels));
  for (double v : data_) {
    if (!(v >= 0.0 && v <= 1.0))
      throw ParameterError("image intensity outside [0,1]: " + std::to_string(v));
  }
}

ImageGrid ImageGrid::from_channels(std::span<const Channel> planes) {
  if (planes.empty()) throw DimensionError("image needs at least one channel");
  const std::size_t h = planes.front().height();
  const std::size_t w = planes.front().width();
  std::vector<double> data;
  data.reserve(h * w * planes.size());
  for (const Channel& p : planes) {
    if (p.height() != h || p.width() != w) throw DimensionError("channel planes differ in size");
    data.insert(data.end(), p.values().begin(), p.values().end());
  }
  return ImageGrid(h, w, planes.size(), std::move(data));
}

std::span<const double> ImageGrid::plane(std::size_t channel) const {
  if (channel >= channels_)
    throw IndexError("channel " + std::to_string(channel) + " out of range for " +
                     std::to_string(channels_) + "-channel image");
  return std::span<const double>(data_).subspan(channel * height_ * width_, height_ * width_);
}

namespace {

// Overlap of source cell s with destination cell d when both axes are scaled
// by the other's length: source cell s spans [s*dst, (s+1)*dst), destination
// cell d spans [d*src, (d+1)*src). All quantities are integers.
struct AxisWeights {
  std::vector<std::size_t> first;           // first contributing source index per output
  std::vector<std::vector<double>> weight;  // integer overlaps
};

AxisWeights area_weights(std::size_t src, std::size_t dst) {
  AxisWeights w;
  w.first.resize(dst);
  w.weight.resize(dst);
  for (std::size_t d = 0; d < dst; ++d) {
    const std::size_t lo = d * src;
    const std::size_t hi = (d + 1) * src;
    const std::size_t s0 = lo / dst;
    const std::size_t s1 = (hi + dst - 1) / dst;
    w.first[d] = s0;
    for (std::size_t s = s0; s < s1; ++s) {
      const std::size_t a = std::max(lo, s * dst);
      const std::size_t b = std::min(hi, (s + 1) * dst);
      w.weight[d].push_back(static_cast<double>(b - a));
    }
  }
  return w;
}

std::vector<double> resample_area(std::span<const double> plane, std::size_t h, std::size_t w,
                                  std::size_t th, std::size_t tw) {
  const AxisWeights rows = area_weights(h, th);
  const AxisWeights cols = area_weights(w, tw);
  const double norm = static_cast<double>(h) * static_cast<double>(w);

  // Columns first, into an h x tw buffer, then rows.
  std::vector<double> tmp(h * tw);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t j = 0; j < tw; ++j) {
      double acc = 0.0;
      const auto& wt = cols.weight[j];
      for (std::size_t k = 0; k < wt.size(); ++k) acc += wt[k] * plane[r * w + cols.first[j] + k];
      tmp[r * tw + j] = acc;
    }
  }
  std::vector<double> out(th * tw);
  for (std::size_t i = 0; i < th; ++i) {
    const auto& wt = rows.weight[i];
    for (std::size_t j = 0; j < tw; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < wt.size(); ++k) acc += wt[k] * tmp[(rows.first[i] + k) * tw + j];
      out[i * tw + j] = std::clamp(acc / norm, 0.0, 1.0);
    }
  }
  return out;
}

std::vector<double> resample_bilinear(std::span<const double> plane, std::size_t h, std::size_t w,
                                      std::size_t th, std::size_t tw) {
  auto source_coord = [](std::size_t i, std::size_t src, std::size_t dst) {
    const double x = (static_cast<double>(i) + 0.5) * static_cast<double>(src) /
                         static_cast<double>(dst) - 0.5;
    return std::clamp(x, 0.0, static_cast<double>(src - 1));
  };
  std::vector<double> out(th * tw);
  for (std::size_t i = 0; i < th; ++i) {
    const double y = source_coord(i, h, th);
    const auto y0 = static_cast<std::size_t>(std::floor(y));
    const std::size_t y1 = std::min(y0 + 1, h - 1);
    const double fy = y - static_cast<double>(y0);
    for (std::size_t j = 0; j < tw; ++j) {
      const double x = source_coord(j, w, tw);
      const auto x0 = static_cast<std::size_t>(std::floor(x));
      const std::size_t x1 = std::min(x0 + 1, w - 1);
      const double fx = x - static_cast<double>(x0);
      const double top = plane[y0 * w + x0] * (1.0 - fx) + plane[y0 * w + x1] * fx;
      const double bot = plane[y1 * w + x0] * (1.0 - fx) + plane[y1 * w + x1] * fx;
      out[i * tw + j] = std::clamp(top * (1.0 - fy) + bot * fy, 0.0, 1.0);
    }
  }
  return out;
}

}  // namespace

ImageGrid downsample(const ImageGrid& img, std::size_t target_height, std::size_t target_width,
                     ResampleMethod method) {
  if (target_height == 0 || target_width == 0)
    throw DimensionError("downsample target must be at least 1x1");
  if (target_height > img.height() || target_width > img.width())
    throw DimensionError("downsample target " + std::to_string(target_height) + "x" +
                         std::to_string(target_width) + " exceeds source " +
                         std::to_string(img.height()) + "x" + std::to_string(img.width()));
  if (target_height == img.height() && target_width == img.width()) return img;

  std::vector<double> data;
  data.reserve(target_height * target_width * img.channels());
  for (std::size_t c = 0; c < img.channels(); ++c) {
    auto plane = method == ResampleMethod::area
                     ? resample_area(img.plane(c), img.height(), img.width(), target_height,
                                     target_width)
                     : resample_bilinear(img.plane(c), img.height(), img.width(), target_height,
                                         target_width);
    data.insert(data.end(), plane.begin(), plane.end());
  }
  return ImageGrid(target_height, target_width, img.channels(), std::move(data));
}

Channel select_channel(const ImageGrid& img, std::size_t channel) {
  auto p = img.plane(channel);
  return Channel(img.height(), img.width(), std::vector<double>(p.begin(), p.end()));
}

BinaryMask binarize(const Channel& channel, double threshold, ThresholdMode mode) {
  BinaryMask mask(channel.height(), channel.width());
  auto in = channel.values();
  auto out = mask.values();
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i] = mode == ThresholdMode::keep_above ? (in[i] >= threshold) : (in[i] <= threshold);
  }
  return mask;
}

void ClassStatsAccumulator::add(const std::string& label, const ImageGrid& img) {
  PerClass& pc = classes_[label];
  if (pc.images == 0) {
    pc.channels.assign(img.channels(), Moments{});
  } else if (pc.channels.size() != img.channels()) {
    throw DimensionError("class '" + label + "' mixes " + std::to_string(pc.channels.size()) +
                         "- and " + std::to_string(img.channels()) + "-channel images");
  }
  for (std::size_t c = 0; c < img.channels(); ++c) {
    auto plane = img.plane(c);
    double sum = 0.0;
    for (double v : plane) sum += v;
    const double n = static_cast<double>(plane.size());
    double mean = sum / n;
    double residual = 0.0;  // one correction pass: constants come out exact
    for (double v : plane) residual += v - mean;
    mean += residual / n;
    double m2 = 0.0;
    for (double v : plane) m2 += (v - mean) * (v - mean);

    Moments& acc = pc.channels[c];
    if (acc.n == 0.0) {
      acc = {n, mean, m2};
      continue;
    }
    const double total = acc.n + n;
    const double delta = mean - acc.mean;
    acc.mean += delta * n / total;
    acc.m2 += m2 + delta * delta * acc.n * n / total;
    acc.n = total;
  }
  ++pc.images;
}

std::vector<ClassStats> ClassStatsAccumulator::result() const {
  std::vector<ClassStats> out;
  for (const auto& [label, pc] : classes_) {
    ClassStats s;
    s.label = label;
    s.count = pc.images;
    for (const Moments& m : pc.channels) {
      s.mean.push_back(m.mean);
      s.sd.push_back(std::sqrt(std::max(0.0, m.m2 / m.n)));
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<ClassStats> class_stats(std::span<const LabeledImage> dataset) {
  if (dataset.empty()) throw EmptyInputError("class_stats needs at least one image");
  ClassStatsAccumulator acc;
  for (const LabeledImage& item : dataset) acc.add(item.label, item.image);
  return acc.result();
}

}  // namespace topofeat
