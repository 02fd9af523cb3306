#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>

#include "pixelprobe/image.hpp"

namespace pixelprobe {

/// Weights of the built-in two-layer stride-2 network.
///
/// Filter layout is output-major, then kernel row, kernel column, input
/// channel: conv1_filters[((o * 3 + ky) * 3 + kx) * 3 + c] and
/// conv2_filters[((o * 3 + ky) * 3 + kx) * 8 + c].
struct NetworkWeights {
  static constexpr int kChannels = 8;
  static constexpr int kConv1Size = kChannels * 3 * 3 * 3;
  static constexpr int kConv2Size = kChannels * 3 * 3 * kChannels;

  std::array<double, kConv1Size> conv1_filters{};
  std::array<double, kChannels> conv1_bias{};
  std::array<double, kConv2Size> conv2_filters{};
  std::array<double, kChannels> conv2_bias{};
  std::array<double, kChannels> dense_weights{};
  double dense_bias = 0.0;

  double& conv1(int o, int ky, int kx, int c) {
    return conv1_filters[((o * 3 + ky) * 3 + kx) * 3 + c];
  }
  double conv1(int o, int ky, int kx, int c) const {
    return conv1_filters[((o * 3 + ky) * 3 + kx) * 3 + c];
  }
  double& conv2(int o, int ky, int kx, int c) {
    return conv2_filters[((o * 3 + ky) * 3 + kx) * kChannels + c];
  }
  double conv2(int o, int ky, int kx, int c) const {
    return conv2_filters[((o * 3 + ky) * 3 + kx) * kChannels + c];
  }

  bool all_finite() const;

  friend bool operator==(const NetworkWeights&, const NetworkWeights&) = default;
};

/// Full forward pass: x/255 -> conv3x3/s2/p1 + ReLU -> conv3x3/s2/p1 + ReLU
/// -> global average pool -> dense -> sigmoid. The network is fully
/// convolutional, so any non-empty image size is accepted.
double builtin_forward(const NetworkWeights& weights, const Image& image);

/// Handcrafted center-surround detector; dark round spots score high.
///
/// Generation procedure:
///   conv1 filter 0: 3x3 difference-of-Gaussians-like kernel on luminance,
///     center -1, each of the 8 ring taps +1/8, every tap split evenly over
///     the three input channels (x 1/3). Zero-sum, so flat regions give 0.
///   conv2 filter 0: tent kernel on conv1 channel 0 (center 1, edges 1/2,
///     corners 1/4). With stride 2 every conv1 output is covered with total
///     weight 1, so conv2 re-sums conv1 without adding parity structure.
///   dense: logit = kSpotGain * (S - kSpotOffset), where S is the summed
///     conv2 response of a 64x64 input (256 pooled positions), i.e.
///     dense_weights[0] = kSpotGain * 256, dense_bias = -kSpotGain * kSpotOffset.
///   Everything else (filters 1..7, all biases) is zero.
NetworkWeights spotnet_weights();

inline constexpr double kSpotGain = 4.0;
inline constexpr double kSpotOffset = 1.8;

/// SplitMix64 stream from `seed`, consumed in field order conv1_filters,
/// conv1_bias, conv2_filters, conv2_bias, dense_weights, dense_bias. Each
/// output u maps to -0.1 + 0.2 * (u >> 11) * 2^-53, a real in [-0.1, 0.1).
NetworkWeights random_weights(std::uint64_t seed);

/// Resolves "spotnet", "random:<seed>", or a path to a weights JSON file.
/// Throws ConfigError on unknown presets and malformed files.
NetworkWeights load_weights(std::string_view source);
void save_weights(const NetworkWeights& weights, const std::filesystem::path& path);

}  // namespace pixelprobe
