#pragma once

// Layer kernels shared by the full forward pass and the incremental
// perturbation scorer. Both paths must call these exact functions so their
// floating-point operation sequences match.

#include <cmath>
#include <vector>

#include "pixelprobe/image.hpp"
#include "pixelprobe/network.hpp"

namespace pixelprobe::detail {

inline constexpr int kC = NetworkWeights::kChannels;

/// Output extent of a 3x3, stride-2, pad-1 convolution.
constexpr int conv_out(int n) { return (n + 1) / 2; }

struct Shape {
  int h0, w0;  // input
  int h1, w1;  // conv1
  int h2, w2;  // conv2

  static Shape of(const Image& image) {
    const int h = static_cast<int>(image.height());
    const int w = static_cast<int>(image.width());
    return {h, w, conv_out(h), conv_out(w), conv_out(conv_out(h)), conv_out(conv_out(w))};
  }
};

inline double channel_value(std::uint8_t v) { return static_cast<double>(v) / 255.0; }

/// HWC input scaled to [0, 1].
inline void load_input(const Image& image, std::vector<double>& input) {
  input.resize(image.pixel_count() * 3);
  std::size_t i = 0;
  for (const Rgb& p : image.pixels()) {
    input[i++] = channel_value(p.r);
    input[i++] = channel_value(p.g);
    input[i++] = channel_value(p.b);
  }
}

inline double relu(double v) { return v > 0.0 ? v : 0.0; }

/// conv1 activations (all filters) at output position (oy, ox), HWC input.
inline void conv1_at(const NetworkWeights& w, const double* input, const Shape& s, int oy,
                     int ox, double* out) {
  for (int o = 0; o < kC; ++o) {
    double acc = w.conv1_bias[o];
    for (int ky = 0; ky < 3; ++ky) {
      const int iy = 2 * oy + ky - 1;
      if (iy < 0 || iy >= s.h0) continue;
      for (int kx = 0; kx < 3; ++kx) {
        const int ix = 2 * ox + kx - 1;
        if (ix < 0 || ix >= s.w0) continue;
        const double* px = input + (static_cast<std::size_t>(iy) * s.w0 + ix) * 3;
        const double* k = &w.conv1_filters[((o * 3 + ky) * 3 + kx) * 3];
        for (int c = 0; c < 3; ++c) acc += k[c] * px[c];
      }
    }
    out[o] = relu(acc);
  }
}

/// conv2 activations at (oy, ox) over HWC conv1 activations.
inline void conv2_at(const NetworkWeights& w, const double* conv1, const Shape& s, int oy,
                     int ox, double* out) {
  for (int o = 0; o < kC; ++o) {
    double acc = w.conv2_bias[o];
    for (int ky = 0; ky < 3; ++ky) {
      const int iy = 2 * oy + ky - 1;
      if (iy < 0 || iy >= s.h1) continue;
      for (int kx = 0; kx < 3; ++kx) {
        const int ix = 2 * ox + kx - 1;
        if (ix < 0 || ix >= s.w1) continue;
        const double* a = conv1 + (static_cast<std::size_t>(iy) * s.w1 + ix) * kC;
        const double* k = &w.conv2_filters[((o * 3 + ky) * 3 + kx) * kC];
        for (int c = 0; c < kC; ++c) acc += k[c] * a[c];
      }
    }
    out[o] = relu(acc);
  }
}

/// Global average pool (filter-major, positions row-major), dense, sigmoid.
inline double head(const NetworkWeights& w, const double* conv2, const Shape& s) {
  const std::size_t positions = static_cast<std::size_t>(s.h2) * s.w2;
  double z = w.dense_bias;
  for (int o = 0; o < kC; ++o) {
    double sum = 0.0;
    for (std::size_t i = 0; i < positions; ++i) sum += conv2[i * kC + o];
    z += w.dense_weights[o] * (sum / static_cast<double>(positions));
  }
  return 1.0 / (1.0 + std::exp(-z));
}

inline void conv1_full(const NetworkWeights& w, const double* input, const Shape& s,
                       std::vector<double>& conv1) {
  conv1.resize(static_cast<std::size_t>(s.h1) * s.w1 * kC);
  for (int oy = 0; oy < s.h1; ++oy)
    for (int ox = 0; ox < s.w1; ++ox)
      conv1_at(w, input, s, oy, ox, &conv1[(static_cast<std::size_t>(oy) * s.w1 + ox) * kC]);
}

inline void conv2_full(const NetworkWeights& w, const double* conv1, const Shape& s,
                       std::vector<double>& conv2) {
  conv2.resize(static_cast<std::size_t>(s.h2) * s.w2 * kC);
  for (int oy = 0; oy < s.h2; ++oy)
    for (int ox = 0; ox < s.w2; ++ox)
      conv2_at(w, conv1, s, oy, ox, &conv2[(static_cast<std::size_t>(oy) * s.w2 + ox) * kC]);
}

/// Output indices [lo, hi] of a stride-2 pad-1 3x3 layer that read input
/// index `i`, clipped to [0, n).
inline void affected_range(int i, int n, int& lo, int& hi) {
  lo = i / 2;           // ceil((i - 1) / 2) for i >= 0
  hi = (i + 1) / 2;
  if (hi > n - 1) hi = n - 1;
}

}  // namespace pixelprobe::detail
