#pragma once

// Generators, reference oracles and fixtures shared by the unit tests and the
// acceptance runner. Oracles here deliberately avoid the library's algorithms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "topofeat/filtration.hpp"
#include "topofeat/image.hpp"
#include "topofeat/image_io.hpp"
#include "topofeat/persistence.hpp"

namespace support {

using namespace topofeat;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ------------------------------------------------------------ generators

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::mt19937_64& engine() { return eng_; }

  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(eng_); }

  FiltrationField field(std::size_t h, std::size_t w, int levels) {
    std::vector<double> v(h * w);
    for (auto& x : v) x = integer(0, levels - 1);
    return FiltrationField(h, w, std::move(v));
  }
  FiltrationField real_field(std::size_t h, std::size_t w) {
    std::vector<double> v(h * w);
    for (auto& x : v) x = real(0.0, 1.0);
    return FiltrationField(h, w, std::move(v));
  }
  Channel channel(std::size_t h, std::size_t w) {
    Channel c(h, w);
    for (auto& x : c.values()) x = real(0.0, 1.0);
    return c;
  }
  BinaryMask mask(std::size_t h, std::size_t w, double density = 0.5) {
    BinaryMask m(h, w);
    for (auto& x : m.values()) x = coin(density) ? 1 : 0;
    return m;
  }
  ImageGrid image(std::size_t h, std::size_t w, std::size_t c) {
    std::vector<double> v(h * w * c);
    for (auto& x : v) x = real(0.0, 1.0);
    return ImageGrid(h, w, c, std::move(v));
  }
  /// Up to `max_points` finite bars with integer coordinates in [0, range].
  PersistenceDiagram diagram(std::size_t max_points, int range = 10) {
    PersistenceDiagram d;
    const std::size_t n = index(max_points + 1);
    for (std::size_t i = 0; i < n; ++i) {
      const int b = integer(0, range - 1);
      const int e = integer(b + 1, range);
      d.pairs.push_back({double(b), double(e)});
    }
    return d;
  }
  PersistenceDiagram real_diagram(std::size_t min_points, std::size_t max_points) {
    PersistenceDiagram d;
    const std::size_t n = min_points + index(max_points - min_points + 1);
    for (std::size_t i = 0; i < n; ++i) {
      const double b = real(0.0, 1.0);
      d.pairs.push_back({b, b + real(0.01, 1.0)});
    }
    return d;
  }

 private:
  std::mt19937_64 eng_;
};

// --------------------------------------------------------------- oracles

/// Degree-0 barcode by flood-filling the 8-connected sublevel set at every
/// distinct value and tracking which earlier components each one absorbs.
inline PersistenceDiagram sweep_h0(const FiltrationField& f) {
  const std::size_t h = f.height(), w = f.width(), n = h * w;
  std::vector<double> levels(f.values().begin(), f.values().end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  // Each live component is keyed by its oldest pixel: smallest (value, index).
  auto older = [&](std::size_t a, std::size_t b) {
    const double va = f.values()[a], vb = f.values()[b];
    return va < vb || (va == vb && a < b);
  };
  std::vector<std::size_t> prev_label(n, n);  // component key per pixel at previous level
  PersistenceDiagram out;
  for (double t : levels) {
    std::vector<std::size_t> label(n, n);
    for (std::size_t s = 0; s < n; ++s) {
      if (f.values()[s] > t || label[s] != n) continue;
      std::vector<std::size_t> comp{s}, stack{s};
      label[s] = s;
      while (!stack.empty()) {
        const std::size_t p = stack.back();
        stack.pop_back();
        const int r = int(p / w), c = int(p % w);
        for (int dr = -1; dr <= 1; ++dr)
          for (int dc = -1; dc <= 1; ++dc) {
            const int rr = r + dr, cc = c + dc;
            if (rr < 0 || cc < 0 || rr >= int(h) || cc >= int(w)) continue;
            const std::size_t q = std::size_t(rr) * w + std::size_t(cc);
            if (f.values()[q] > t || label[q] != n) continue;
            label[q] = s;
            comp.push_back(q);
            stack.push_back(q);
          }
      }
      std::size_t key = comp.front();
      std::vector<std::size_t> absorbed;
      for (std::size_t p : comp) {
        if (older(p, key)) key = p;
        if (prev_label[p] != n) absorbed.push_back(prev_label[p]);
      }
      std::sort(absorbed.begin(), absorbed.end());
      absorbed.erase(std::unique(absorbed.begin(), absorbed.end()), absorbed.end());
      for (std::size_t a : absorbed)
        if (a != key) out.pairs.push_back({f.values()[a], t});
      for (std::size_t p : comp) label[p] = key;
    }
    prev_label = label;
  }
  std::vector<std::size_t> roots(prev_label);
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  for (std::size_t r : roots) out.pairs.push_back({f.values()[r], kInf});
  std::erase_if(out.pairs, [](const PersistencePair& p) { return p.death == p.birth; });
  return out.sorted();
}

/// Minimum over every partial matching of the largest L-infinity cost;
/// unmatched points pay their distance to the diagonal.
inline double brute_bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  const auto& A = a.pairs;
  const auto& B = b.pairs;
  std::vector<bool> used(B.size(), false);
  double best = kInf;
  std::function<void(std::size_t, double)> go = [&](std::size_t i, double cost) {
    if (cost >= best) return;
    if (i == A.size()) {
      for (std::size_t j = 0; j < B.size(); ++j)
        if (!used[j]) cost = std::max(cost, (B[j].death - B[j].birth) / 2);
      best = std::min(best, cost);
      return;
    }
    go(i + 1, std::max(cost, (A[i].death - A[i].birth) / 2));
    for (std::size_t j = 0; j < B.size(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      const double c =
          std::max(std::abs(A[i].birth - B[j].birth), std::abs(A[i].death - B[j].death));
      go(i + 1, std::max(cost, c));
      used[j] = false;
    }
  };
  go(0, 0.0);
  return best;
}

/// Direct count of bars [b, d) containing x.
inline int count_alive(const PersistenceDiagram& d, double x) {
  int n = 0;
  for (const auto& p : d.pairs) n += (p.birth <= x && x < p.death);
  return n;
}

/// L^p norm of the Betti curve, integrating count^p between consecutive endpoints.
inline double betti_norm_oracle(const PersistenceDiagram& d, double p) {
  std::vector<double> xs;
  for (const auto& q : d.pairs) {
    xs.push_back(q.birth);
    xs.push_back(q.death);
  }
  std::sort(xs.begin(), xs.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    total += std::pow(count_alive(d, (xs[i] + xs[i + 1]) / 2), p) * (xs[i + 1] - xs[i]);
  return std::pow(total, 1.0 / p);
}

/// k-th largest tent max(0, min(x - b, d - x)), k counted from 1.
inline double landscape_oracle(const PersistenceDiagram& d, std::size_t k, double x) {
  std::vector<double> tents;
  for (const auto& p : d.pairs) tents.push_back(std::max(0.0, std::min(x - p.birth, p.death - x)));
  std::sort(tents.rbegin(), tents.rend());
  return k <= tents.size() ? tents[k - 1] : 0.0;
}

/// Base-2 entropy of the quantized k x k window around each pixel, borders clamped.
inline Grid2D<double> entropy_oracle(const Channel& ch, int k, int levels) {
  const int h = int(ch.height()), w = int(ch.width()), r = k / 2;
  Grid2D<double> out(ch.height(), ch.width());
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) {
      std::map<long, int> counts;
      for (int di = -r; di <= r; ++di)
        for (int dj = -r; dj <= r; ++dj) {
          const int ii = std::clamp(i + di, 0, h - 1), jj = std::clamp(j + dj, 0, w - 1);
          counts[std::lround(std::floor(ch(ii, jj) * (levels - 1) + 0.5))]++;
        }
      double e = 0.0;
      for (const auto& [bin, c] : counts) {
        const double q = double(c) / (k * k);
        e -= q * std::log2(q);
      }
      out(i, j) = e;
    }
  return out;
}

/// Sobel correlation with clamped indices, written out per kernel tap.
inline Grid2D<double> sobel_oracle(const Channel& ch, bool axis_x) {
  static const int gx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  static const int gy[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
  const int h = int(ch.height()), w = int(ch.width());
  Grid2D<double> out(ch.height(), ch.width());
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) {
      double s = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const double v = ch(std::clamp(i + a - 1, 0, h - 1), std::clamp(j + b - 1, 0, w - 1));
          s += (axis_x ? gx[a][b] : gy[a][b]) * v;
        }
      out(i, j) = s;
    }
  return out;
}

/// Area resampling from interval overlaps of output cells with source pixels.
inline std::vector<double> area_oracle(const Channel& ch, std::size_t th, std::size_t tw) {
  const double sh = double(ch.height()) / th, sw = double(ch.width()) / tw;
  std::vector<double> out(th * tw);
  for (std::size_t i = 0; i < th; ++i)
    for (std::size_t j = 0; j < tw; ++j) {
      double acc = 0.0;
      for (std::size_t r = 0; r < ch.height(); ++r) {
        const double oy = std::min(double(r + 1), (i + 1) * sh) - std::max(double(r), i * sh);
        if (oy <= 0) continue;
        for (std::size_t c = 0; c < ch.width(); ++c) {
          const double ox = std::min(double(c + 1), (j + 1) * sw) - std::max(double(c), j * sw);
          if (ox > 0) acc += oy * ox * ch(r, c);
        }
      }
      out[i * tw + j] = acc / (sh * sw);
    }
  return out;
}

// -------------------------------------------------------------- fixtures

/// Several soft Gaussian blobs on a dark background, random per channel.
inline ImageGrid blob_image(Rng& rng, std::size_t size) {
  std::vector<double> data(3 * size * size, 0.0);
  for (std::size_t c = 0; c < 3; ++c) {
    const int blobs = rng.integer(3, 6);
    for (int b = 0; b < blobs; ++b) {
      const double cy = rng.real(0, double(size)), cx = rng.real(0, double(size));
      const double s = rng.real(0.05, 0.12) * double(size);
      for (std::size_t r = 0; r < size; ++r)
        for (std::size_t k = 0; k < size; ++k) {
          double& v = data[(c * size + r) * size + k];
          const double d2 = (r - cy) * (r - cy) + (k - cx) * (k - cx);
          v = std::max(v, std::exp(-d2 / (2 * s * s)));
        }
    }
  }
  for (auto& v : data) v = std::clamp(v + rng.real(-0.03, 0.03), 0.0, 1.0);
  return ImageGrid(size, size, 3, std::move(data));
}

/// Parallel sinusoidal stripes at a random angle, period and phase.
inline ImageGrid stripe_image(Rng& rng, std::size_t size) {
  const double angle = rng.real(0, std::numbers::pi);
  const double period = rng.real(0.15, 0.3) * double(size);
  const double phase = rng.real(0, 2 * std::numbers::pi);
  std::vector<double> data(3 * size * size);
  for (std::size_t c = 0; c < 3; ++c) {
    const double gain = rng.real(0.6, 1.0);
    for (std::size_t r = 0; r < size; ++r)
      for (std::size_t k = 0; k < size; ++k) {
        const double u = std::cos(angle) * k + std::sin(angle) * r;
        const double v = 0.5 + 0.5 * gain * std::sin(2 * std::numbers::pi * u / period + phase);
        data[(c * size + r) * size + k] = std::clamp(v + rng.real(-0.03, 0.03), 0.0, 1.0);
      }
  }
  return ImageGrid(size, size, 3, std::move(data));
}

/// Two classes ("blobs", "stripes") of three 40x40 RGB PNGs each.
inline void write_fixture_dataset(const std::filesystem::path& root) {
  Rng rng(20240601);
  for (const char* label : {"blobs", "stripes"}) {
    std::filesystem::create_directories(root / label);
    for (int i = 0; i < 3; ++i) {
      const ImageGrid img =
          std::string(label) == "blobs" ? blob_image(rng, 40) : stripe_image(rng, 40);
      write_png(root / label / ("img" + std::to_string(i) + ".png"), img);
    }
  }
}

/// Self-deleting unique directory under the system temp path.
class TempDir {
 public:
  TempDir() {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("topofeat-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::FILE* f = std::fopen(p.c_str(), "rb");
  if (!f) return {};
  std::string s;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) s.append(buf, n);
  std::fclose(f);
  return s;
}

}  // namespace support
