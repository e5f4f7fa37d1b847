#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace rigdepth {

// Dense row-major image with 1 or 3 channels, values nominally in [0, 1].
// Layout: data[(y * width + x) * channels + c].
struct ImagePlane {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<double> data;

  static ImagePlane zeros(int w, int h, int c) {
    ImagePlane img;
    img.width = w;
    img.height = h;
    img.channels = c;
    img.data.assign(static_cast<std::size_t>(w) * h * c, 0.0);
    return img;
  }

  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width + x) * channels + c;
  }
  double at(int x, int y, int c) const { return data[index(x, y, c)]; }
  double& at(int x, int y, int c) { return data[index(x, y, c)]; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * height;
  }
  bool same_shape(const ImagePlane& o) const {
    return width == o.width && height == o.height && channels == o.channels;
  }
};

// Per-pixel depth stored as log(depth) so optimization steps stay positive.
// depth_at returns metres.
struct DepthField {
  int width = 0;
  int height = 0;
  std::vector<double> log_depth;

  static DepthField constant(int w, int h, double depth) {
    DepthField f;
    f.width = w;
    f.height = h;
    f.log_depth.assign(static_cast<std::size_t>(w) * h, std::log(depth));
    return f;
  }

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width + x;
  }
  double log_at(int x, int y) const { return log_depth[index(x, y)]; }
  double& log_at(int x, int y) { return log_depth[index(x, y)]; }
  double depth_at(int x, int y) const { return std::exp(log_at(x, y)); }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * height;
  }
};

// 0/1 per-pixel mask.
struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  static BinaryMask filled(int w, int h, bool value) {
    BinaryMask m;
    m.width = w;
    m.height = h;
    m.bits.assign(static_cast<std::size_t>(w) * h,
                  value ? std::uint8_t{1} : std::uint8_t{0});
    return m;
  }
  static BinaryMask ones(int w, int h) { return filled(w, h, true); }
  static BinaryMask zeros(int w, int h) { return filled(w, h, false); }

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width + x;
  }
  bool at(int x, int y) const { return bits[index(x, y)] != 0; }
  void set(int x, int y, bool v) { bits[index(x, y)] = v ? 1 : 0; }
  long count() const {
    long n = 0;
    for (std::uint8_t b : bits) n += (b != 0);
    return n;
  }
};

inline BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b) {
  assert(a.width == b.width && a.height == b.height);
  BinaryMask out = a;
  for (std::size_t i = 0; i < out.bits.size(); ++i) {
    out.bits[i] = (a.bits[i] != 0 && b.bits[i] != 0) ? 1 : 0;
  }
  return out;
}

}  // namespace rigdepth
