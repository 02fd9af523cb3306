#pragma once

// Reference forward pass for the built-in network. Deliberately written in a
// different style from the library: channel-first tensors, an explicitly
// zero-padded input, and a single generic convolution routine.

#include <cmath>
#include <vector>

#include "pixelprobe/image.hpp"
#include "pixelprobe/network.hpp"

namespace oracle {

struct Tensor {
  int c = 0, h = 0, w = 0;
  std::vector<double> v;
  Tensor(int c_, int h_, int w_) : c(c_), h(h_), w(w_), v(static_cast<std::size_t>(c_) * h_ * w_) {}
  double& at(int ch, int y, int x) { return v[(static_cast<std::size_t>(ch) * h + y) * w + x]; }
  double at(int ch, int y, int x) const { return v[(static_cast<std::size_t>(ch) * h + y) * w + x]; }
};

inline Tensor pad1(const Tensor& t) {
  Tensor p(t.c, t.h + 2, t.w + 2);
  for (int ch = 0; ch < t.c; ++ch)
    for (int y = 0; y < t.h; ++y)
      for (int x = 0; x < t.w; ++x) p.at(ch, y + 1, x + 1) = t.at(ch, y, x);
  return p;
}

// weight(o, ky, kx, c)
template <typename W>
Tensor conv_s2_relu(const Tensor& in, int out_c, W weight, const double* bias) {
  const Tensor p = pad1(in);
  const int oh = (in.h - 1) / 2 + 1;
  const int ow = (in.w - 1) / 2 + 1;
  Tensor out(out_c, oh, ow);
  for (int o = 0; o < out_c; ++o) {
    for (int oy = 0; oy < oh; ++oy) {
      for (int ox = 0; ox < ow; ++ox) {
        double acc = 0.0;
        for (int c = 0; c < in.c; ++c)
          for (int ky = 0; ky < 3; ++ky)
            for (int kx = 0; kx < 3; ++kx) acc += weight(o, ky, kx, c) * p.at(c, 2 * oy + ky, 2 * ox + kx);
        acc += bias[o];
        out.at(o, oy, ox) = acc > 0 ? acc : 0;
      }
    }
  }
  return out;
}

inline Tensor conv1_activations(const pixelprobe::NetworkWeights& w, const pixelprobe::Image& img) {
  Tensor in(3, static_cast<int>(img.height()), static_cast<int>(img.width()));
  for (int y = 0; y < in.h; ++y) {
    for (int x = 0; x < in.w; ++x) {
      const auto p = img(x, y);
      in.at(0, y, x) = p.r / 255.0;
      in.at(1, y, x) = p.g / 255.0;
      in.at(2, y, x) = p.b / 255.0;
    }
  }
  return conv_s2_relu(in, 8, [&](int o, int ky, int kx, int c) { return w.conv1(o, ky, kx, c); },
                      w.conv1_bias.data());
}

inline double forward(const pixelprobe::NetworkWeights& w, const pixelprobe::Image& img) {
  const Tensor a1 = conv1_activations(w, img);
  const Tensor a2 = conv_s2_relu(a1, 8, [&](int o, int ky, int kx, int c) { return w.conv2(o, ky, kx, c); },
                                 w.conv2_bias.data());
  double z = 0.0;
  for (int o = 0; o < 8; ++o) {
    double mean = 0.0;
    for (int y = 0; y < a2.h; ++y)
      for (int x = 0; x < a2.w; ++x) mean += a2.at(o, y, x);
    mean /= a2.h * a2.w;
    z += w.dense_weights[o] * mean;
  }
  z += w.dense_bias;
  return 1.0 / (1.0 + std::exp(-z));
}

}  // namespace oracle
