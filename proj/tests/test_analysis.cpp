#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles/streaming_stats.hpp"
#include "pixelprobe/analysis.hpp"
#include "pixelprobe/error.hpp"
#include "pixelprobe/random.hpp"

namespace pixelprobe {
namespace {

AttackRecord at(std::uint32_t x, std::uint32_t y, Rgb c = {}, Direction d = Direction::kMinimize) {
  AttackRecord r;
  r.direction = d;
  r.vector = {x, y, c.r, c.g, c.b};
  r.original_score = 0.95;
  r.modified_score = 0.4;
  return r;
}

// Records whose coordinates fall in the four parity classes with the given counts.
std::vector<AttackRecord> parity_fixture(std::uint64_t ee, std::uint64_t eo, std::uint64_t oe,
                                         std::uint64_t oo) {
  std::vector<AttackRecord> rs;
  auto add = [&](std::uint64_t n, std::uint32_t px, std::uint32_t py) {
    for (std::uint64_t i = 0; i < n; ++i)
      rs.push_back(at(px + 2 * static_cast<std::uint32_t>(i % 32), py + 2 * static_cast<std::uint32_t>(i / 32 % 32)));
  };
  add(ee, 0, 0);
  add(eo, 0, 1);
  add(oe, 1, 0);
  add(oo, 1, 1);
  return rs;
}

TEST(Chromatic, RmseValues) {
  EXPECT_EQ(chromatic_rmse(Rgb{10, 20, 30}, {10, 20, 30}), 0.0);
  EXPECT_EQ(chromatic_rmse(Rgb{255, 255, 255}, {0, 0, 0}), 1.0);
  EXPECT_NEAR(chromatic_rmse(Rgb{255, 0, 0}, {0, 0, 0}), 0.57735, 1e-5);
  EXPECT_NEAR(chromatic_rmse(std::array<double, 3>{0, 0, 0}, {255, 255, 255}), 1.0, 1e-15);
}

TEST(Chromatic, ScatterCarriesScoresAndDelta) {
  AttackRecord r = at(1, 1, {255, 0, 0});
  r.neighborhood_mean = {0, 0, 0};
  const auto pts = chromatic_scatter(std::vector{r});
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_NEAR(pts[0].h, std::sqrt(1.0 / 3.0), 1e-15);
  EXPECT_EQ(pts[0].original_score, 0.95);
  EXPECT_EQ(pts[0].modified_score, 0.4);
  EXPECT_EQ(pts[0].delta, 0.4 - 0.95);
  std::ostringstream csv;
  write_chromatic_csv(pts, csv);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "h,original,modified,delta");
}

TEST(Chromatic, EmptyInputGivesHeaderOnly) {
  std::ostringstream csv;
  write_chromatic_csv(chromatic_scatter({}), csv);
  EXPECT_EQ(csv.str(), "h,original,modified,delta\n");
}

TEST(Summary, TwoPointFixture) {
  const std::vector<double> v{0, 64};
  const Summary s = summarize(v);
  EXPECT_EQ(s.mean, 32.0);
  EXPECT_EQ(s.median, 32.0);
  EXPECT_EQ(s.stddev, 32.0);
}

TEST(Summary, SingletonAndOddCounts) {
  EXPECT_EQ(summarize(std::vector<double>{7}).stddev, 0.0);
  EXPECT_EQ(summarize(std::vector<double>{7}).median, 7.0);
  const Summary s = summarize(std::vector<double>{5, 1, 3});
  EXPECT_EQ(s.median, 3.0);
  EXPECT_NEAR(s.stddev, std::sqrt(8.0 / 3.0), 1e-15);
  EXPECT_THROW(summarize(std::vector<double>{}), EmptyCollectionError);
}

TEST(SpatialStats, ClusterFixture) {
  // Hand-computed: x {30,32,34}, y {31,31,31}, red {255,255,0}.
  const std::vector<AttackRecord> rs{at(30, 31, {255, 10, 0}), at(32, 31, {255, 20, 0}),
                                     at(34, 31, {0, 30, 0})};
  const SpatialStats s = spatial_stats(rs);
  EXPECT_EQ(s.count, 3u);
  EXPECT_EQ(s.x().mean, 32.0);
  EXPECT_NEAR(s.x().stddev, std::sqrt(8.0 / 3.0), 1e-12);
  EXPECT_EQ(s.y().stddev, 0.0);
  EXPECT_EQ(s.red().mean, 170.0);
  EXPECT_EQ(s.red().median, 255.0);
  EXPECT_NEAR(s.red().stddev, std::sqrt(2.0 * 85 * 85 + 170.0 * 170) / std::sqrt(3.0), 1e-12);
  EXPECT_EQ(s.green().median, 20.0);
  EXPECT_EQ(s.blue().mean, 0.0);
}

TEST(SpatialStats, MatchesStreamingOracle) {
  SplitMix64 rng(123);
  std::vector<AttackRecord> rs;
  for (int i = 0; i < 1000; ++i) {
    rs.push_back(at(static_cast<std::uint32_t>(rng.index(64)), static_cast<std::uint32_t>(rng.index(64)),
                    {static_cast<std::uint8_t>(rng.index(256)), static_cast<std::uint8_t>(rng.index(256)),
                     static_cast<std::uint8_t>(rng.index(256))}));
  }
  const SpatialStats s = spatial_stats(rs);
  for (int col = 0; col < 5; ++col) {
    std::vector<double> xs;
    for (const AttackRecord& r : rs) {
      const double v[5] = {double(r.vector.x), double(r.vector.y), double(r.vector.r),
                           double(r.vector.g), double(r.vector.b)};
      xs.push_back(v[col]);
    }
    const oracle::Moments m = oracle::streaming_moments(xs);
    EXPECT_NEAR(s.columns[col].mean, m.mean, 1e-9);
    EXPECT_NEAR(s.columns[col].stddev, m.sd, 1e-9);
    EXPECT_EQ(s.columns[col].median, m.median);
  }
}

TEST(SpatialStats, TableLayout) {
  const std::vector<AttackRecord> rs{at(0, 0, {0, 0, 0}), at(64, 2, {64, 0, 1})};
  std::ostringstream out;
  write_spatial_table(spatial_stats(rs), out);
  EXPECT_EQ(out.str(),
            "measure,X,Y,Red,Green,Blue\n"
            "Mean,32,1,32,0,0.5\n"
            "Median,32,1,32,0,0.5\n"
            "SD,32,1,32,0,0.5\n");
  EXPECT_THROW(spatial_stats({}), EmptyCollectionError);
}

TEST(Parity, Classification) {
  EXPECT_EQ(parity_of(0, 0), Parity::kEvenEven);
  EXPECT_EQ(parity_of(2, 5), Parity::kEvenOdd);
  EXPECT_EQ(parity_of(3, 4), Parity::kOddEven);
  EXPECT_EQ(parity_of(63, 63), Parity::kOddOdd);
}

TEST(Parity, MitosisToNormalCounts) {
  const ParityReport r = parity_analysis(parity_fixture(5334, 3, 3, 3));
  EXPECT_EQ(r.total, 5343u);
  EXPECT_EQ(r.count(Parity::kEvenEven), 5334u);
  EXPECT_NEAR(r.fraction(Parity::kEvenEven), 0.9983, 1e-4);
}

TEST(Parity, NormalToMitosisCounts) {
  const ParityReport r = parity_analysis(parity_fixture(49573, 10384, 10384, 10384));
  EXPECT_EQ(r.total, 80725u);
  EXPECT_NEAR(r.fraction(Parity::kEvenEven), 0.614, 1e-4);
  double sum = 0;
  for (double f : r.fractions) sum += f;
  EXPECT_NEAR(sum, 1.0, 1e-15);
}

TEST(Parity, AllEvenFixtureAndCsv) {
  const ParityReport r = parity_analysis(parity_fixture(4, 0, 0, 0));
  EXPECT_EQ(r.fraction(Parity::kEvenEven), 1.0);
  std::ostringstream out;
  write_parity_csv(r, out);
  EXPECT_EQ(out.str(),
            "class,count,fraction\neven-even,4,1\neven-odd,0,0\nodd-even,0,0\nodd-odd,0,0\n"
            "total,4,1\n");
  EXPECT_THROW(parity_analysis({}), EmptyCollectionError);
}

TEST(Placement, CountsAndFilter) {
  std::vector<AttackRecord> rs{at(1, 1), at(1, 1), at(0, 2)};
  rs[2].modified_score = 0.95;  // not a success
  const PlacementGrid all = placement_heatmap(rs, 3, 3);
  EXPECT_EQ(all.at(1, 1), 2u);
  EXPECT_EQ(all.at(0, 2), 1u);
  EXPECT_EQ(all.total(), 3u);
  const PlacementGrid ok = placement_heatmap(rs, 3, 3, Thresholds{});
  EXPECT_EQ(ok.at(0, 2), 0u);
  EXPECT_EQ(ok.total(), 2u);
}

TEST(Placement, OutOfGridRecordIsNamed) {
  std::vector<AttackRecord> rs{at(0, 0), at(5, 0)};
  rs[1].image_id = "slide-9";
  try {
    placement_heatmap(rs, 4, 4);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("slide-9"), std::string::npos);
  }
}

TEST(Placement, CsvRoundTrip) {
  const PlacementGrid g = placement_heatmap(std::vector{at(2, 1), at(0, 0)}, 3, 2);
  std::stringstream io;
  write_placement_csv(g, io);
  EXPECT_EQ(io.str(), "x,y,count\n0,0,1\n1,0,0\n2,0,0\n0,1,0\n1,1,0\n2,1,1\n");
  const PlacementGrid back = read_placement_csv(io);
  EXPECT_EQ(back.width, 3u);
  EXPECT_EQ(back.height, 2u);
  EXPECT_EQ(back.counts, g.counts);
  std::istringstream bad("x,y,n\n");
  EXPECT_THROW(read_placement_csv(bad), FormatError);
}

ConfidenceMap swing_map(std::uint32_t w, std::uint32_t h, auto swing_of) {
  ConfidenceMap m;
  m.width = w;
  m.height = h;
  for (std::uint32_t y = 0; y < h; ++y)
    for (std::uint32_t x = 0; x < w; ++x) {
      const double s = swing_of(x, y);
      m.min_map.push_back(0.5 - s / 2);
      m.max_map.push_back(0.5 + s / 2);
      m.avg_map.push_back(0.5);
    }
  return m;
}

TEST(Checkerboard, FlatAndPerfectMaps) {
  EXPECT_NEAR(checkerboard_score(swing_map(8, 8, [](auto, auto) { return 0.3; })), 0.0, 1e-12);
  EXPECT_EQ(checkerboard_score(swing_map(8, 8, [](auto, auto) { return 0.0; })), 0.0);
  const ConfidenceMap perfect =
      swing_map(8, 8, [](auto x, auto y) { return parity_of(x, y) == Parity::kEvenEven ? 0.5 : 0.0; });
  EXPECT_DOUBLE_EQ(checkerboard_score(perfect), 4.0);
  const ParityReport hi = high_swing_parity(perfect);
  EXPECT_EQ(hi.fraction(Parity::kEvenEven), 1.0);
  EXPECT_EQ(hi.total, 16u);
  const ConfidenceMap inverse =
      swing_map(8, 8, [](auto x, auto y) { return parity_of(x, y) == Parity::kEvenEven ? 0.0 : 0.5; });
  EXPECT_LT(checkerboard_score(inverse), 0.0);
  EXPECT_THROW(high_swing_parity(swing_map(2, 2, [](auto, auto) { return 0.0; })), EmptyCollectionError);
}

}  // namespace
}  // namespace pixelprobe
