#include "pixelprobe/render.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pixelprobe/error.hpp"

namespace pixelprobe {

std::string_view to_string(RenderMode mode) {
  switch (mode) {
    case RenderMode::kMin: return "min";
    case RenderMode::kMax: return "max";
    case RenderMode::kAvg: return "avg";
    case RenderMode::kSwing: return "swing";
    case RenderMode::kCounts: return "counts";
  }
  return "?";
}

RenderMode parse_render_mode(std::string_view text) {
  for (auto m : {RenderMode::kMin, RenderMode::kMax, RenderMode::kAvg, RenderMode::kSwing,
                 RenderMode::kCounts}) {
    if (text == to_string(m)) return m;
  }
  throw ParameterError("unknown render mode \"" + std::string(text) +
                       "\" (expected min, max, avg, swing or counts)");
}

Field map_field(const ConfidenceMap& map, RenderMode mode) {
  Field f{map.width, map.height, {}};
  switch (mode) {
    case RenderMode::kMin: f.values = map.min_map; break;
    case RenderMode::kMax: f.values = map.max_map; break;
    case RenderMode::kAvg: f.values = map.avg_map; break;
    case RenderMode::kSwing:
      f.values.resize(map.min_map.size());
      for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = map.max_map[i] - map.min_map[i];
      break;
    case RenderMode::kCounts:
      throw ParameterError("mode \"counts\" applies to placement grids, not confidence maps");
  }
  return f;
}

Field grid_field(const PlacementGrid& grid) {
  Field f{grid.width, grid.height, std::vector<double>(grid.counts.size())};
  for (std::size_t i = 0; i < grid.counts.size(); ++i) f.values[i] = static_cast<double>(grid.counts[i]);
  return f;
}

Rgb heat_color(double t) {
  struct Stop { double r, g, b; };
  constexpr Stop kLow{0, 0, 128}, kMid{255, 255, 255}, kHigh{200, 0, 0};
  t = std::clamp(std::isnan(t) ? 0.5 : t, 0.0, 1.0);
  const Stop& a = t <= 0.5 ? kLow : kMid;
  const Stop& b = t <= 0.5 ? kMid : kHigh;
  const double u = t <= 0.5 ? t * 2.0 : (t - 0.5) * 2.0;
  auto mix = [u](double p, double q) {
    return static_cast<std::uint8_t>(std::lround(p + (q - p) * u));
  };
  return {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
}

Image render_heatmap(const Field& field, const RenderOptions& options) {
  if (field.values.size() != std::size_t{field.width} * field.height || field.values.empty()) {
    throw DimensionError("field size does not match its dimensions");
  }
  if (options.scale < 1) throw ParameterError("scale must be >= 1");
  double lo, hi;
  if (options.range) {
    std::tie(lo, hi) = *options.range;
    if (!(lo <= hi)) throw ParameterError("render range must satisfy lo <= hi");
  } else {
    const auto [mn, mx] = std::minmax_element(field.values.begin(), field.values.end());
    lo = *mn;
    hi = *mx;
  }
  const double span = hi - lo;
  const auto s = static_cast<std::uint32_t>(options.scale);
  Image out(field.width * s, field.height * s);
  for (std::uint32_t y = 0; y < field.height; ++y) {
    for (std::uint32_t x = 0; x < field.width; ++x) {
      const double v = field.values[std::size_t{y} * field.width + x];
      const Rgb c = heat_color(span > 0.0 ? (v - lo) / span : 0.5);
      for (std::uint32_t dy = 0; dy < s; ++dy)
        for (std::uint32_t dx = 0; dx < s; ++dx) out(x * s + dx, y * s + dy) = c;
    }
  }
  return out;
}

}  // namespace pixelprobe
