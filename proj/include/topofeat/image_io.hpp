#pragma once

#include <filesystem>
#include <string>

#include "topofeat/image.hpp"

namespace topofeat {

struct LoadOptions {
  /// Channel count for headerless CSV rasters (other formats carry their own).
  std::size_t csv_channels = 1;
};

/// Dispatches on extension: .png, .jpg/.jpeg, .csv. Integer formats are
/// divided by their maximum representable value. Alpha is dropped.
ImageGrid load_image(const std::filesystem::path& path, const LoadOptions& opts = {});

ImageGrid load_png(const std::filesystem::path& path);
ImageGrid load_jpeg(const std::filesystem::path& path);

/// One line per pixel row; each line holds width * channels comma-separated
/// reals with channels interleaved (r,g,b,r,g,b,...).
ImageGrid load_csv_raster(const std::filesystem::path& path, std::size_t channels);

/// 8-bit PNG writer (gray or RGB). Intensities are rounded to the nearest level.
void write_png(const std::filesystem::path& path, const ImageGrid& img);

void write_csv_raster(const std::filesystem::path& path, const ImageGrid& img);

bool is_supported_image(const std::filesystem::path& path);

}  // namespace topofeat
