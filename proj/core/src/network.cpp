#include "pixelprobe/network.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "network_kernels.hpp"
#include "pixelprobe/error.hpp"
#include "pixelprobe/random.hpp"

namespace pixelprobe {

namespace {

using nlohmann::json;

constexpr std::string_view kRandomPrefix = "random:";

template <std::size_t N>
void read_array(const json& doc, const char* key, std::array<double, N>& dst,
                const std::string& where) {
  const auto it = doc.find(key);
  if (it == doc.end() || !it->is_array()) {
    throw ConfigError(where + ": missing array \"" + key + "\"");
  }
  if (it->size() != N) {
    throw ConfigError(where + ": \"" + key + "\" has " + std::to_string(it->size()) +
                      " values, expected " + std::to_string(N));
  }
  for (std::size_t i = 0; i < N; ++i) {
    const json& v = (*it)[i];
    if (!v.is_number()) throw ConfigError(where + ": \"" + key + "\" holds a non-number");
    dst[i] = v.get<double>();
  }
}

NetworkWeights weights_from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open weights file");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": malformed weights JSON: " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(path.string() + ": weights file is not a JSON object");
  const std::string where = path.string();
  NetworkWeights w;
  read_array(doc, "conv1_filters", w.conv1_filters, where);
  read_array(doc, "conv1_bias", w.conv1_bias, where);
  read_array(doc, "conv2_filters", w.conv2_filters, where);
  read_array(doc, "conv2_bias", w.conv2_bias, where);
  read_array(doc, "dense_weights", w.dense_weights, where);
  const auto bias = doc.find("dense_bias");
  if (bias == doc.end()) throw ConfigError(where + ": missing \"dense_bias\"");
  // Accept both a scalar and a one-element array.
  const json& b = bias->is_array() && bias->size() == 1 ? (*bias)[0] : *bias;
  if (!b.is_number()) throw ConfigError(where + ": \"dense_bias\" is not a number");
  w.dense_bias = b.get<double>();
  if (!w.all_finite()) throw ConfigError(where + ": weights contain non-finite values");
  return w;
}

}  // namespace

bool NetworkWeights::all_finite() const {
  auto finite = [](const auto& arr) {
    for (double v : arr)
      if (!std::isfinite(v)) return false;
    return true;
  };
  return finite(conv1_filters) && finite(conv1_bias) && finite(conv2_filters) &&
         finite(conv2_bias) && finite(dense_weights) && std::isfinite(dense_bias);
}

double builtin_forward(const NetworkWeights& weights, const Image& image) {
  if (image.empty()) throw DimensionError("builtin network needs a non-empty image");
  const auto shape = detail::Shape::of(image);
  std::vector<double> input, conv1, conv2;
  detail::load_input(image, input);
  detail::conv1_full(weights, input.data(), shape, conv1);
  detail::conv2_full(weights, conv1.data(), shape, conv2);
  return detail::head(weights, conv2.data(), shape);
}

NetworkWeights spotnet_weights() {
  NetworkWeights w;
  for (int ky = 0; ky < 3; ++ky) {
    for (int kx = 0; kx < 3; ++kx) {
      const double tap = (ky == 1 && kx == 1) ? -1.0 : 1.0 / 8.0;
      for (int c = 0; c < 3; ++c) w.conv1(0, ky, kx, c) = tap / 3.0;
    }
  }
  constexpr double kTent[3] = {0.5, 1.0, 0.5};
  for (int ky = 0; ky < 3; ++ky)
    for (int kx = 0; kx < 3; ++kx) w.conv2(0, ky, kx, 0) = kTent[ky] * kTent[kx];

  constexpr double kPooledPositions = 256.0;  // 16x16 conv2 grid of a 64x64 input
  w.dense_weights[0] = kSpotGain * kPooledPositions;
  w.dense_bias = -kSpotGain * kSpotOffset;
  return w;
}

NetworkWeights random_weights(std::uint64_t seed) {
  SplitMix64 rng(seed);
  auto draw = [&rng] { return -0.1 + 0.2 * rng.uniform(); };
  NetworkWeights w;
  for (double& v : w.conv1_filters) v = draw();
  for (double& v : w.conv1_bias) v = draw();
  for (double& v : w.conv2_filters) v = draw();
  for (double& v : w.conv2_bias) v = draw();
  for (double& v : w.dense_weights) v = draw();
  w.dense_bias = draw();
  return w;
}

NetworkWeights load_weights(std::string_view source) {
  if (source == "spotnet") return spotnet_weights();
  if (source.starts_with(kRandomPrefix)) {
    const std::string_view digits = source.substr(kRandomPrefix.size());
    std::uint64_t seed = 0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), seed);
    if (digits.empty() || ec != std::errc{} || end != digits.data() + digits.size()) {
      throw ConfigError("bad random weights seed in \"" + std::string(source) + "\"");
    }
    return random_weights(seed);
  }
  const std::filesystem::path path{std::string(source)};
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw ConfigError("unknown weights preset or missing file \"" + std::string(source) + "\"");
  }
  return weights_from_file(path);
}

void save_weights(const NetworkWeights& weights, const std::filesystem::path& path) {
  json doc;
  doc["meta"] = {
      {"format", "pixelprobe-weights"},
      {"version", 1},
      {"layout", "output filter, kernel row, kernel column, input channel"},
      {"shapes",
       {{"conv1_filters", {8, 3, 3, 3}},
        {"conv1_bias", {8}},
        {"conv2_filters", {8, 3, 3, 8}},
        {"conv2_bias", {8}},
        {"dense_weights", {8}},
        {"dense_bias", {1}}}},
  };
  doc["conv1_filters"] = weights.conv1_filters;
  doc["conv1_bias"] = weights.conv1_bias;
  doc["conv2_filters"] = weights.conv2_filters;
  doc["conv2_bias"] = weights.conv2_bias;
  doc["dense_weights"] = weights.dense_weights;
  doc["dense_bias"] = json::array({weights.dense_bias});
  std::ofstream out(path);
  if (!out) throw IoError(path.string() + ": cannot write weights file");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError(path.string() + ": write failed");
}

}  // namespace pixelprobe
