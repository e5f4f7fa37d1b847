#pragma once

// Internal helpers shared by the loss forward pass and the gradient engine.
// 3x3 box sums with border cropping: out(p) = sum of f over the in-bounds
// 3x3 neighborhood of p.  The stencil is symmetric, so the same routine
// serves as its own transpose when distributing window adjoints.

#include <cmath>
#include <cstddef>
#include <vector>

#include "rigdepth/image.hpp"
#include "rigdepth/losses.hpp"

namespace rigdepth::detail {

inline void box3(const std::vector<double>& f, int w, int h,
                 std::vector<double>& tmp, std::vector<double>& out) {
  tmp.resize(f.size());
  out.resize(f.size());
  // horizontal pass
  for (int y = 0; y < h; ++y) {
    const double* row = f.data() + static_cast<std::size_t>(y) * w;
    double* trow = tmp.data() + static_cast<std::size_t>(y) * w;
    if (w == 1) {
      trow[0] = row[0];
      continue;
    }
    trow[0] = row[0] + row[1];
    for (int x = 1; x + 1 < w; ++x) {
      trow[x] = row[x - 1] + row[x] + row[x + 1];
    }
    trow[w - 1] = row[w - 2] + row[w - 1];
  }
  // vertical pass
  for (int y = 0; y < h; ++y) {
    const double* above =
        y > 0 ? tmp.data() + static_cast<std::size_t>(y - 1) * w : nullptr;
    const double* here = tmp.data() + static_cast<std::size_t>(y) * w;
    const double* below =
        y + 1 < h ? tmp.data() + static_cast<std::size_t>(y + 1) * w : nullptr;
    double* orow = out.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      double s = here[x];
      if (above) s += above[x];
      if (below) s += below[x];
      orow[x] = s;
    }
  }
}

// Windowed moment sums for one channel pair under a mask: counts plus
// first/second raw moments of a and b over each pixel's 3x3 window.
struct SsimMoments {
  std::vector<double> n, sa, sb, saa, sbb, sab;
};

inline void ssim_moments(const ImagePlane& a, const ImagePlane& b,
                         const BinaryMask& mask, int channel,
                         SsimMoments& m) {
  const int w = a.width, h = a.height;
  const std::size_t size = static_cast<std::size_t>(w) * h;
  static thread_local std::vector<double> fa, fb, faa, fbb, fab, fn, tmp;
  fn.resize(size);
  fa.resize(size);
  fb.resize(size);
  faa.resize(size);
  fbb.resize(size);
  fab.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    if (mask.bits[i]) {
      const double av = a.data[i * a.channels + channel];
      const double bv = b.data[i * b.channels + channel];
      fn[i] = 1.0;
      fa[i] = av;
      fb[i] = bv;
      faa[i] = av * av;
      fbb[i] = bv * bv;
      fab[i] = av * bv;
    } else {
      fn[i] = fa[i] = fb[i] = faa[i] = fbb[i] = fab[i] = 0.0;
    }
  }
  box3(fn, w, h, tmp, m.n);
  box3(fa, w, h, tmp, m.sa);
  box3(fb, w, h, tmp, m.sb);
  box3(faa, w, h, tmp, m.saa);
  box3(fbb, w, h, tmp, m.sbb);
  box3(fab, w, h, tmp, m.sab);
}

// Per-center SSIM pieces assembled from the moment sums.
struct SsimTerms {
  double mu_a = 0.0, mu_b = 0.0;
  double a1 = 0.0, a2 = 0.0, b1 = 0.0, b2 = 0.0;  // numerators/denominators
  double value = 0.0;
  double n = 0.0;
};

inline bool ssim_at(const SsimMoments& m, std::size_t i, SsimTerms& t) {
  const double n = m.n[i];
  if (!(n > 0.0)) return false;
  const double mu_a = m.sa[i] / n;
  const double mu_b = m.sb[i] / n;
  const double var_a = m.saa[i] / n - mu_a * mu_a;
  const double var_b = m.sbb[i] / n - mu_b * mu_b;
  const double cov = m.sab[i] / n - mu_a * mu_b;
  t.mu_a = mu_a;
  t.mu_b = mu_b;
  t.n = n;
  t.a1 = 2.0 * mu_a * mu_b + kSsimC1;
  t.a2 = 2.0 * cov + kSsimC2;
  t.b1 = mu_a * mu_a + mu_b * mu_b + kSsimC1;
  t.b2 = var_a + var_b + kSsimC2;
  t.value = (t.a1 * t.a2) / (t.b1 * t.b2);
  return true;
}

// Shared forward pass of the per-pixel photometric loss.  When `keep` is
// non-null the per-channel window moments are retained so a backward pass
// can rebuild the SSIM pieces without recomputing the box filters from the
// images.
inline ImagePlane photometric_forward(const ImagePlane& target,
                                      const ImagePlane& synth,
                                      const BinaryMask& mask, double alpha,
                                      std::vector<SsimMoments>* keep) {
  const std::size_t size = target.pixel_count();
  const int channels = target.channels;
  static thread_local std::vector<double> ssim_sum;
  ssim_sum.assign(size, 0.0);
  SsimMoments local;
  if (keep) keep->resize(static_cast<std::size_t>(channels));
  for (int c = 0; c < channels; ++c) {
    SsimMoments& m = keep ? (*keep)[static_cast<std::size_t>(c)] : local;
    ssim_moments(target, synth, mask, c, m);
    for (std::size_t i = 0; i < size; ++i) {
      if (!mask.bits[i]) continue;
      SsimTerms t;
      if (ssim_at(m, i, t)) ssim_sum[i] += t.value;
    }
  }
  ImagePlane out = ImagePlane::zeros(target.width, target.height, 1);
  const double inv_c = 1.0 / channels;
  for (std::size_t i = 0; i < size; ++i) {
    if (!mask.bits[i]) continue;
    double l1 = 0.0;
    for (int c = 0; c < channels; ++c) {
      l1 += std::abs(target.data[i * channels + c] -
                     synth.data[i * channels + c]);
    }
    l1 *= inv_c;
    const double s = ssim_sum[i] * inv_c;
    out.data[i] = alpha * 0.5 * (1.0 - s) + (1.0 - alpha) * l1;
  }
  return out;
}

}  // namespace rigdepth::detail
