#include "topofeat/filtration.hpp"

#include <algorithm>
#include <cmath>

#include "topofeat/format.hpp"
#include "topofeat/simd/kernels.hpp"

namespace topofeat {

namespace {

// Real number as a name-safe token: 0.25 -> "0p25", -1 -> "m1".
std::string name_token(double v) {
  std::string s = format_real(v);
  for (char& ch : s) {
    if (ch == '.') ch = 'p';
    if (ch == '-') ch = 'm';
  }
  return s;
}

void check_finite(std::span<const double> values) {
  for (double v : values)
    if (!std::isfinite(v)) throw ParameterError("filtration values must be finite");
}

}  // namespace

FiltrationField::FiltrationField(Grid2D<double> values) : grid_(std::move(values)) {
  check_finite(grid_.values());
}

FiltrationField::FiltrationField(std::size_t height, std::size_t width, std::vector<double> values)
    : grid_(height, width, std::move(values)) {
  check_finite(grid_.values());
}

double FiltrationField::min_value() const {
  return *std::min_element(values().begin(), values().end());
}

double FiltrationField::max_value() const {
  return *std::max_element(values().begin(), values().end());
}

Direction::Direction(double drow, double dcol) : v_{drow, dcol} {
  const double norm = std::hypot(drow, dcol);
  if (!(std::abs(norm - 1.0) <= 1e-12))
    throw ParameterError("direction must be a unit vector, got norm " + format_real(norm));
}

std::string Direction::name() const {
  if (*this == up()) return "up";
  if (*this == down()) return "down";
  if (*this == left()) return "left";
  if (*this == right()) return "right";
  return "d" + name_token(v_[0]) + "_" + name_token(v_[1]);
}

std::string Center::name() const { return "r" + name_token(row) + "c" + name_token(col); }

FiltrationField height_filtration(const BinaryMask& mask, const Direction& v) {
  const std::size_t h = mask.height();
  const std::size_t w = mask.width();
  Grid2D<double> out(h, w);
  double top = -INFINITY;
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const double proj = static_cast<double>(r) * v.row() + static_cast<double>(c) * v.col();
      out(r, c) = proj;
      top = std::max(top, proj);
    }
  }
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c)
      if (!mask(r, c)) out(r, c) = top;
  return FiltrationField(std::move(out));
}

FiltrationField radial_filtration(const BinaryMask& mask, const Center& center) {
  const std::size_t h = mask.height();
  const std::size_t w = mask.width();
  if (!(center.row >= 0.0 && center.row <= static_cast<double>(h - 1) && center.col >= 0.0 &&
        center.col <= static_cast<double>(w - 1)))
    throw ParameterError("center (" + format_real(center.row) + ", " + format_real(center.col) +
                         ") outside " + std::to_string(h) + "x" + std::to_string(w) + " image");
  Grid2D<double> out(h, w);
  double top = 0.0;
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const double dr = static_cast<double>(r) - center.row;
      const double dc = static_cast<double>(c) - center.col;
      const double dist = std::sqrt(dr * dr + dc * dc);
      out(r, c) = dist;
      top = std::max(top, dist);
    }
  }
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c)
      if (!mask(r, c)) out(r, c) = top;
  return FiltrationField(std::move(out));
}

FiltrationField grayscale_filtration(const Channel& channel) { return FiltrationField(channel); }

Channel histogram_binning(const Channel& channel, std::size_t levels) {
  if (levels < 2) throw ParameterError("histogram binning needs at least 2 levels");
  const double top = static_cast<double>(levels - 1);
  Channel out = channel;
  for (double& v : out.values()) v = std::floor(v * top + 0.5) / top;
  return out;
}

FiltrationField local_entropy_filtration(const Channel& channel, std::size_t k,
                                         std::size_t levels) {
  if (k % 2 == 0 || k == 0) throw ParameterError("entropy kernel size must be odd");
  const std::size_t h = channel.height();
  const std::size_t w = channel.width();
  if (k > std::min(h, w))
    throw ParameterError("entropy kernel " + std::to_string(k) + " exceeds image " +
                         std::to_string(h) + "x" + std::to_string(w));
  if (levels < 2) throw ParameterError("entropy histogram needs at least 2 levels");

  const double top = static_cast<double>(levels - 1);
  std::vector<std::uint32_t> bins(h * w);
  for (std::size_t i = 0; i < bins.size(); ++i)
    bins[i] = static_cast<std::uint32_t>(std::floor(channel.values()[i] * top + 0.5));

  // -(c/n) log2(c/n) for each possible count c.
  const std::size_t n = k * k;
  std::vector<double> term(n + 1, 0.0);
  for (std::size_t c = 1; c < n; ++c) {
    const double p = static_cast<double>(c) / static_cast<double>(n);
    term[c] = -p * std::log2(p);
  }

  const auto radius = static_cast<std::ptrdiff_t>(k / 2);
  const auto hh = static_cast<std::ptrdiff_t>(h);
  const auto ww = static_cast<std::ptrdiff_t>(w);
  std::vector<std::uint32_t> window(n);
  Grid2D<double> out(h, w);
  for (std::ptrdiff_t r = 0; r < hh; ++r) {
    for (std::ptrdiff_t c = 0; c < ww; ++c) {
      std::size_t idx = 0;
      for (std::ptrdiff_t dr = -radius; dr <= radius; ++dr) {
        const std::ptrdiff_t rr = std::clamp(r + dr, std::ptrdiff_t{0}, hh - 1);
        for (std::ptrdiff_t dc = -radius; dc <= radius; ++dc) {
          const std::ptrdiff_t cc = std::clamp(c + dc, std::ptrdiff_t{0}, ww - 1);
          window[idx++] = bins[static_cast<std::size_t>(rr * ww + cc)];
        }
      }
      std::sort(window.begin(), window.end());
      double entropy = 0.0;
      std::size_t run = 1;
      for (std::size_t i = 1; i <= n; ++i) {
        if (i < n && window[i] == window[i - 1]) {
          ++run;
        } else {
          entropy += term[run];
          run = 1;
        }
      }
      out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = entropy;
    }
  }
  return FiltrationField(std::move(out));
}

FiltrationField gradient_filtration(const Channel& channel, GradientAxis axis) {
  const std::size_t h = channel.height();
  const std::size_t w = channel.width();
  if (h < 3 || w < 3) throw ParameterError("gradient filtration needs at least a 3x3 image");

  const std::size_t stride = w + 2;
  std::vector<double> padded((h + 2) * stride);
  for (std::size_t pr = 0; pr < h + 2; ++pr) {
    const std::size_t r = std::clamp<std::size_t>(pr, 1, h) - 1;
    for (std::size_t pc = 0; pc < w + 2; ++pc) {
      const std::size_t c = std::clamp<std::size_t>(pc, 1, w) - 1;
      padded[pr * stride + pc] = channel(r, c);
    }
  }
  std::vector<double> out(h * w);
  if (axis == GradientAxis::x) {
    simd::sobel_x(padded, h, w, out);
  } else {
    simd::sobel_y(padded, h, w, out);
  }
  return FiltrationField(h, w, std::move(out));
}

FiltrationField shift_to_nonnegative(const FiltrationField& field) {
  const double lo = field.min_value();
  std::vector<double> out(field.values().begin(), field.values().end());
  for (double& v : out) v -= lo;
  return FiltrationField(field.height(), field.width(), std::move(out));
}

}  // namespace topofeat
