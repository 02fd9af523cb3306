#include "pixelprobe/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "pixelprobe/error.hpp"

namespace pixelprobe {

namespace {

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

double chromatic_rmse(const std::array<double, 3>& color, const std::array<double, 3>& mean) {
  double acc = 0.0;
  for (int c = 0; c < 3; ++c) {
    const double d = (color[c] - mean[c]) / 255.0;
    acc += d * d;
  }
  return std::min(1.0, std::sqrt(acc / 3.0));
}

double chromatic_rmse(const Rgb& color, const std::array<double, 3>& mean) {
  const std::array<double, 3> c{double(color.r), double(color.g), double(color.b)};
  return chromatic_rmse(c, mean);
}

std::vector<ChromaticPoint> chromatic_scatter(std::span<const AttackRecord> records) {
  std::vector<ChromaticPoint> out;
  out.reserve(records.size());
  for (const AttackRecord& r : records) {
    out.push_back({chromatic_rmse(r.vector.color(), r.neighborhood_mean), r.original_score,
                   r.modified_score, r.modified_score - r.original_score});
  }
  return out;
}

Summary summarize(std::span<const double> values) {
  if (values.empty()) throw EmptyCollectionError("cannot summarize an empty collection");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  Summary s;
  s.mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(ss / n);

  std::vector<double> sorted(values.begin(), values.end());
  const std::size_t mid = sorted.size() / 2;
  std::nth_element(sorted.begin(), sorted.begin() + mid, sorted.end());
  const double upper = sorted[mid];
  if (sorted.size() % 2 == 1) {
    s.median = upper;
  } else {
    const double lower = *std::max_element(sorted.begin(), sorted.begin() + mid);
    s.median = lower + (upper - lower) / 2.0;
  }
  return s;
}

SpatialStats spatial_stats(std::span<const AttackRecord> records) {
  if (records.empty()) throw EmptyCollectionError("spatial statistics need at least one record");
  std::array<std::vector<double>, 5> cols;
  for (auto& c : cols) c.reserve(records.size());
  for (const AttackRecord& r : records) {
    cols[0].push_back(r.vector.x);
    cols[1].push_back(r.vector.y);
    cols[2].push_back(r.vector.r);
    cols[3].push_back(r.vector.g);
    cols[4].push_back(r.vector.b);
  }
  SpatialStats stats;
  stats.count = records.size();
  for (std::size_t i = 0; i < cols.size(); ++i) stats.columns[i] = summarize(cols[i]);
  return stats;
}

std::string_view to_string(Parity p) {
  switch (p) {
    case Parity::kEvenEven: return "even-even";
    case Parity::kEvenOdd: return "even-odd";
    case Parity::kOddEven: return "odd-even";
    case Parity::kOddOdd: return "odd-odd";
  }
  return "?";
}

ParityReport parity_report(std::span<const std::array<std::uint32_t, 2>> points) {
  if (points.empty()) throw EmptyCollectionError("parity analysis needs at least one point");
  ParityReport rep;
  for (const auto& p : points) ++rep.counts[static_cast<int>(parity_of(p[0], p[1]))];
  rep.total = points.size();
  for (int k = 0; k < 4; ++k) {
    rep.fractions[k] = static_cast<double>(rep.counts[k]) / static_cast<double>(rep.total);
  }
  return rep;
}

ParityReport parity_analysis(std::span<const AttackRecord> records) {
  std::vector<std::array<std::uint32_t, 2>> pts;
  pts.reserve(records.size());
  for (const AttackRecord& r : records) pts.push_back({r.vector.x, r.vector.y});
  return parity_report(pts);
}

std::uint64_t PlacementGrid::total() const {
  std::uint64_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

PlacementGrid placement_heatmap(std::span<const AttackRecord> records, std::uint32_t width,
                                std::uint32_t height, std::optional<Thresholds> success_filter) {
  PlacementGrid grid{width, height, std::vector<std::uint64_t>(std::size_t{width} * height, 0)};
  for (std::size_t i = 0; i < records.size(); ++i) {
    const AttackRecord& r = records[i];
    if (success_filter && !is_success(r, *success_filter)) continue;
    if (r.vector.x >= width || r.vector.y >= height) {
      throw DataError("record " + std::to_string(i) + " (image " + r.image_id + ") at (" +
                      std::to_string(r.vector.x) + ", " + std::to_string(r.vector.y) +
                      ") lies outside the " + std::to_string(width) + "x" +
                      std::to_string(height) + " grid");
    }
    ++grid.counts[std::size_t{r.vector.y} * width + r.vector.x];
  }
  return grid;
}

double checkerboard_score(const ConfidenceMap& map) {
  double ee_sum = 0.0, other_sum = 0.0;
  std::size_t ee_n = 0, other_n = 0;
  for (std::uint32_t y = 0; y < map.height; ++y) {
    for (std::uint32_t x = 0; x < map.width; ++x) {
      const double s = map.swing(x, y);
      if (parity_of(x, y) == Parity::kEvenEven) {
        ee_sum += s;
        ++ee_n;
      } else {
        other_sum += s;
        ++other_n;
      }
    }
  }
  const double n = static_cast<double>(ee_n + other_n);
  if (n == 0 || ee_n == 0 || other_n == 0) return 0.0;
  const double global = (ee_sum + other_sum) / n;
  if (global == 0.0) return 0.0;
  return (ee_sum / static_cast<double>(ee_n) - other_sum / static_cast<double>(other_n)) / global;
}

ParityReport high_swing_parity(const ConfidenceMap& map, double fraction) {
  double top = 0.0;
  for (std::uint32_t y = 0; y < map.height; ++y)
    for (std::uint32_t x = 0; x < map.width; ++x) top = std::max(top, map.swing(x, y));
  std::vector<std::array<std::uint32_t, 2>> pts;
  for (std::uint32_t y = 0; y < map.height; ++y)
    for (std::uint32_t x = 0; x < map.width; ++x)
      if (map.swing(x, y) > fraction * top) pts.push_back({x, y});
  return parity_report(pts);
}

void write_chromatic_csv(std::span<const ChromaticPoint> points, std::ostream& out) {
  out << "h,original,modified,delta\n";
  for (const ChromaticPoint& p : points) {
    out << num(p.h) << ',' << num(p.original_score) << ',' << num(p.modified_score) << ','
        << num(p.delta) << '\n';
  }
}

void write_spatial_table(const SpatialStats& stats, std::ostream& out) {
  out << "measure";
  for (auto name : SpatialStats::kColumns) out << ',' << name;
  out << '\n';
  auto row = [&](const char* label, double Summary::*field) {
    out << label;
    for (const Summary& s : stats.columns) out << ',' << num(s.*field);
    out << '\n';
  };
  row("Mean", &Summary::mean);
  row("Median", &Summary::median);
  row("SD", &Summary::stddev);
}

void write_parity_csv(const ParityReport& report, std::ostream& out) {
  out << "class,count,fraction\n";
  for (int k = 0; k < 4; ++k) {
    out << to_string(static_cast<Parity>(k)) << ',' << report.counts[k] << ','
        << num(report.fractions[k]) << '\n';
  }
  out << "total," << report.total << ",1\n";
}

void write_placement_csv(const PlacementGrid& grid, std::ostream& out) {
  out << "x,y,count\n";
  for (std::uint32_t y = 0; y < grid.height; ++y)
    for (std::uint32_t x = 0; x < grid.width; ++x)
      out << x << ',' << y << ',' << grid.at(x, y) << '\n';
}

PlacementGrid read_placement_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,y,count", 0) != 0) {
    throw FormatError("placement grid CSV must start with header x,y,count");
  }
  struct Cell { std::uint64_t x, y, count; };
  std::vector<Cell> cells;
  std::size_t number = 1;
  std::uint64_t w = 0, h = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Cell c{};
    std::uint64_t* dst[3] = {&c.x, &c.y, &c.count};
    const char* p = line.data();
    const char* end = p + line.size();
    for (int k = 0; k < 3; ++k) {
      const auto res = std::from_chars(p, end, *dst[k]);
      if (res.ec != std::errc{} || (k < 2 ? (res.ptr == end || *res.ptr != ',') : res.ptr != end)) {
        throw FormatError("placement grid CSV line " + std::to_string(number) + " is malformed");
      }
      p = res.ptr + 1;
    }
    w = std::max(w, c.x + 1);
    h = std::max(h, c.y + 1);
    cells.push_back(c);
  }
  if (cells.empty()) throw FormatError("placement grid CSV has no cells");
  if (w * h > (std::uint64_t{1} << 32)) throw FormatError("placement grid too large");
  PlacementGrid grid{static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(h),
                     std::vector<std::uint64_t>(w * h, 0)};
  for (const Cell& c : cells) grid.counts[c.y * w + c.x] = c.count;
  return grid;
}

}  // namespace pixelprobe
