#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "pixelprobe/analysis.hpp"
#include "pixelprobe/confmap.hpp"
#include "pixelprobe/image.hpp"

namespace pixelprobe {

enum class RenderMode { kMin, kMax, kAvg, kSwing, kCounts };

std::string_view to_string(RenderMode mode);
RenderMode parse_render_mode(std::string_view text);

/// Scalar grid to be colored.
struct Field {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<double> values;  // row-major
};

/// kCounts is not a map mode; ParameterError.
Field map_field(const ConfidenceMap& map, RenderMode mode);
Field grid_field(const PlacementGrid& grid);

/// Three-stop gradient: 0 -> (0,0,128), 0.5 -> (255,255,255), 1 -> (200,0,0),
/// per-channel linear, rounded to nearest. t is clamped to [0, 1].
Rgb heat_color(double t);

struct RenderOptions {
  /// Integer upscale factor (>= 1); each cell becomes scale x scale pixels.
  int scale = 1;
  /// Fixed normalization range; otherwise the field's own min/max.
  std::optional<std::pair<double, double>> range;
};

/// Linear normalization to [0,1] then heat_color. A constant field (or an
/// empty explicit range) renders at t = 0.5.
Image render_heatmap(const Field& field, const RenderOptions& options = {});

}  // namespace pixelprobe
