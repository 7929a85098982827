#include "topofeat/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include <jpeglib.h>
#include <png.h>

#include "topofeat/format.hpp"

namespace topofeat {

namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open " + path.string());
  return f;
}

// Interleaved samples (row-major, channels fastest) to planar [0,1] doubles.
ImageGrid from_interleaved(std::size_t h, std::size_t w, std::size_t ch,
                           const std::vector<double>& interleaved) {
  std::vector<double> planar(h * w * ch);
  for (std::size_t i = 0; i < h * w; ++i)
    for (std::size_t c = 0; c < ch; ++c) planar[c * h * w + i] = interleaved[i * ch + c];
  return ImageGrid(h, w, ch, std::move(planar));
}

}  // namespace

ImageGrid load_png(const std::filesystem::path& path) {
  FilePtr file = open_file(path, "rb");
  unsigned char sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
    throw IoError(path.string() + ": not a PNG file");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw ResourceError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw ResourceError("png_create_info_struct failed");
  }

  std::vector<png_byte> pixels;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int channels = 0;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(path.string() + ": corrupt PNG data");
  }

  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const int color_type = png_get_color_type(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8)
    png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  if (png_get_bit_depth(png, info) == 16) png_set_swap(png);  // host order on little-endian
  png_read_update_info(png, info);

  width = png_get_image_width(png, info);
  height = png_get_image_height(png, info);
  bit_depth = png_get_bit_depth(png, info);
  channels = png_get_channels(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  pixels.resize(rowbytes * height);
  rows.resize(height);
  for (png_uint_32 r = 0; r < height; ++r) rows[r] = pixels.data() + r * rowbytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  const std::size_t h = height;
  const std::size_t w = width;
  const auto ch = static_cast<std::size_t>(channels);
  std::vector<double> interleaved(h * w * ch);
  if (bit_depth == 16) {
    for (std::size_t i = 0; i < interleaved.size(); ++i) {
      std::uint16_t v;
      std::memcpy(&v, pixels.data() + 2 * i, 2);
      interleaved[i] = static_cast<double>(v) / 65535.0;
    }
  } else {
    for (std::size_t i = 0; i < interleaved.size(); ++i)
      interleaved[i] = static_cast<double>(pixels[i]) / 255.0;
  }
  return from_interleaved(h, w, ch, interleaved);
}

namespace {

struct JpegErrorManager {
  jpeg_error_mgr pub;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

}  // namespace

ImageGrid load_jpeg(const std::filesystem::path& path) {
  FilePtr file = open_file(path, "rb");
  jpeg_decompress_struct cinfo;
  JpegErrorManager jerr;
  cinfo.err = jpeg_std_error(&jerr.pub);
  jerr.pub.error_exit = jpeg_error_exit;
  std::vector<unsigned char> pixels;

  if (setjmp(jerr.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw IoError(path.string() + ": corrupt JPEG data (" + jerr.message + ")");
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, file.get());
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_start_decompress(&cinfo);

  const std::size_t w = cinfo.output_width;
  const std::size_t h = cinfo.output_height;
  const auto ch = static_cast<std::size_t>(cinfo.output_components);
  pixels.resize(w * h * ch);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = pixels.data() + static_cast<std::size_t>(cinfo.output_scanline) * w * ch;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);

  std::vector<double> interleaved(pixels.size());
  for (std::size_t i = 0; i < pixels.size(); ++i) interleaved[i] = pixels[i] / 255.0;
  return from_interleaved(h, w, ch, interleaved);
}

ImageGrid load_csv_raster(const std::filesystem::path& path, std::size_t channels) {
  if (channels == 0) throw ParameterError("csv raster needs at least one channel");
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());

  std::vector<double> interleaved;
  std::size_t width = 0;
  std::size_t height = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t fields = 0;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      double v = 0.0;
      if (!parse_real(rest.substr(0, comma), v))
        throw IoError(path.string() + ": bad number on row " + std::to_string(height + 1));
      interleaved.push_back(v);
      ++fields;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields % channels != 0)
      throw IoError(path.string() + ": row " + std::to_string(height + 1) + " has " +
                    std::to_string(fields) + " values, not a multiple of " +
                    std::to_string(channels) + " channels");
    if (height == 0) {
      width = fields / channels;
    } else if (fields / channels != width) {
      throw IoError(path.string() + ": ragged row " + std::to_string(height + 1));
    }
    ++height;
  }
  if (height == 0) throw IoError(path.string() + ": empty raster");
  try {
    return from_interleaved(height, width, channels, interleaved);
  } catch (const Error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

ImageGrid load_image(const std::filesystem::path& path, const LoadOptions& opts) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return load_png(path);
  if (ext == ".jpg" || ext == ".jpeg") return load_jpeg(path);
  if (ext == ".csv") return load_csv_raster(path, opts.csv_channels);
  throw IoError(path.string() + ": unsupported image format");
}

bool is_supported_image(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".csv";
}

void write_png(const std::filesystem::path& path, const ImageGrid& img) {
  if (img.channels() != 1 && img.channels() != 3)
    throw ParameterError("write_png supports 1 or 3 channels");
  FilePtr file = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw ResourceError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw ResourceError("png_create_info_struct failed");
  }

  const std::size_t h = img.height();
  const std::size_t w = img.width();
  const std::size_t ch = img.channels();
  std::vector<png_byte> pixels(h * w * ch);
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c)
      for (std::size_t k = 0; k < ch; ++k)
        pixels[(r * w + c) * ch + k] =
            static_cast<png_byte>(std::lround(img.at(k, r, c) * 255.0));
  std::vector<png_bytep> rows(h);
  for (std::size_t r = 0; r < h; ++r) rows[r] = pixels.data() + r * w * ch;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("failed writing " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 8,
               ch == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void write_csv_raster(const std::filesystem::path& path, const ImageGrid& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (std::size_t r = 0; r < img.height(); ++r) {
    for (std::size_t c = 0; c < img.width(); ++c) {
      for (std::size_t k = 0; k < img.channels(); ++k) {
        if (c != 0 || k != 0) out << ',';
        out << format_real(img.at(k, r, c));
      }
    }
    out << '\n';
  }
}

}  // namespace topofeat
