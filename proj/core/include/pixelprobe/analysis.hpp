#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pixelprobe/attack.hpp"
#include "pixelprobe/confmap.hpp"

namespace pixelprobe {

/// Root-mean-square channel difference on [0,1]-scaled channels. Result in
/// [0, 1].
double chromatic_rmse(const std::array<double, 3>& color, const std::array<double, 3>& mean);
double chromatic_rmse(const Rgb& color, const std::array<double, 3>& mean);

struct ChromaticPoint {
  double h = 0.0;
  double original_score = 0.0;
  double modified_score = 0.0;
  double delta = 0.0;  // modified - original
};

std::vector<ChromaticPoint> chromatic_scatter(std::span<const AttackRecord> records);

struct Summary {
  double mean = 0.0;
  double median = 0.0;
  double stddev = 0.0;  // population (divide by N)
};

/// Per-variable summaries in table column order X, Y, Red, Green, Blue.
struct SpatialStats {
  static constexpr std::array<std::string_view, 5> kColumns{"X", "Y", "Red", "Green", "Blue"};

  std::array<Summary, 5> columns;
  std::size_t count = 0;

  const Summary& x() const { return columns[0]; }
  const Summary& y() const { return columns[1]; }
  const Summary& red() const { return columns[2]; }
  const Summary& green() const { return columns[3]; }
  const Summary& blue() const { return columns[4]; }
};

/// Throws EmptyCollectionError on empty input.
Summary summarize(std::span<const double> values);
SpatialStats spatial_stats(std::span<const AttackRecord> records);

/// Coordinate parity classes, x parity first.
enum class Parity { kEvenEven = 0, kEvenOdd = 1, kOddEven = 2, kOddOdd = 3 };

constexpr Parity parity_of(std::uint32_t x, std::uint32_t y) {
  return static_cast<Parity>(((x & 1U) << 1) | (y & 1U));
}
std::string_view to_string(Parity p);

struct ParityReport {
  std::array<std::uint64_t, 4> counts{};
  std::array<double, 4> fractions{};
  std::uint64_t total = 0;

  std::uint64_t count(Parity p) const { return counts[static_cast<int>(p)]; }
  double fraction(Parity p) const { return fractions[static_cast<int>(p)]; }
};

/// Throws EmptyCollectionError on empty input.
ParityReport parity_report(std::span<const std::array<std::uint32_t, 2>> points);
ParityReport parity_analysis(std::span<const AttackRecord> records);

struct PlacementGrid {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint64_t> counts;  // row-major

  std::uint64_t at(std::uint32_t x, std::uint32_t y) const {
    return counts[static_cast<std::size_t>(y) * width + x];
  }
  std::uint64_t total() const;
};

/// Counts attack coordinates; with a filter only is_success records count.
/// Throws DataError naming the record for out-of-grid coordinates.
PlacementGrid placement_heatmap(std::span<const AttackRecord> records, std::uint32_t width,
                                std::uint32_t height,
                                std::optional<Thresholds> success_filter = std::nullopt);

/// (mean swing on even-even pixels - mean swing elsewhere) / global mean
/// swing, where swing = max - min. Zero when every swing is zero.
double checkerboard_score(const ConfidenceMap& map);

/// Parity classes of the pixels whose swing exceeds `fraction` times the
/// largest swing. Throws EmptyCollectionError when no pixel qualifies.
ParityReport high_swing_parity(const ConfidenceMap& map, double fraction = 0.5);

// CSV writers / readers.
void write_chromatic_csv(std::span<const ChromaticPoint> points, std::ostream& out);
/// Rows Mean/Median/SD, columns X, Y, Red, Green, Blue.
void write_spatial_table(const SpatialStats& stats, std::ostream& out);
void write_parity_csv(const ParityReport& report, std::ostream& out);
/// Header x,y,count; every cell row-major, zeros included.
void write_placement_csv(const PlacementGrid& grid, std::ostream& out);
PlacementGrid read_placement_csv(std::istream& in);

}  // namespace pixelprobe
