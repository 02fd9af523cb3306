#include <gtest/gtest.h>

#include <cstring>
#include <sstream>

#include "oracles/naive_confmap.hpp"
#include "pixelprobe/confmap.hpp"
#include "pixelprobe/error.hpp"
#include "pixelprobe/synthetic.hpp"
#include "test_support.hpp"

namespace pixelprobe {
namespace {

void expect_matches_naive(const ConfidenceMap& map, const oracle::NaiveMap& naive) {
  ASSERT_EQ(map.min_map.size(), naive.min.size());
  for (std::size_t i = 0; i < naive.min.size(); ++i) {
    EXPECT_EQ(map.min_map[i], naive.min[i]) << i;
    EXPECT_EQ(map.max_map[i], naive.max[i]) << i;
    EXPECT_NEAR(map.avg_map[i], naive.avg[i], 1e-9) << i;
  }
}

TEST(Enumerator, Cardinalities) {
  EXPECT_EQ(planned_vector_count(ColorSet(5), 64, 64), 575930368u);
  EXPECT_EQ(planned_vector_count(ColorSet(255), 1, 1), 8u);
  EXPECT_EQ(planned_vector_count(ColorSet(85), 8, 8), 4096u);
  EXPECT_EQ(VectorEnumerator(ColorSet(5), 64, 64).total(), 575930368u);
}

TEST(Enumerator, VisitsEveryVectorOnceInOrder) {
  const ColorSet colors(85);
  VectorEnumerator e(colors, 3, 2);
  std::vector<AttackVector> all;
  while (auto v = e.next()) all.push_back(*v);
  ASSERT_EQ(all.size(), 6u * 64u);
  EXPECT_TRUE(e.done());
  EXPECT_EQ(all.front(), (AttackVector{0, 0, 0, 0, 0}));
  EXPECT_EQ(all[1], (AttackVector{0, 0, 0, 0, 85}));
  EXPECT_EQ(all[64], (AttackVector{1, 0, 0, 0, 0}));
  EXPECT_EQ(all.back(), (AttackVector{2, 1, 255, 255, 255}));
}

TEST(Enumerator, FillStopsAtPixelBoundary) {
  const ColorSet colors(255);
  VectorEnumerator e(colors, 4, 4, {1, 3});
  EXPECT_EQ(e.position(), 11u);
  std::vector<AttackVector> buf(100);
  EXPECT_EQ(e.fill(buf, 3), 5u + 8u);
  EXPECT_EQ(e.cursor(), (EnumerationCursor{3, 0}));
  EXPECT_EQ(buf[0], (AttackVector{1, 0, 0, 255, 255}));
}

TEST(ConfidenceMap, ConstantScorerGivesFlatMap) {
  FunctionScorer constant([](const Image&) { return 0.25; }, "c");
  const ConfidenceMap m = compute_confidence_map(make_noise_image(5, 4, 1), constant, ColorSet(51));
  EXPECT_EQ(check_map(m), "");
  EXPECT_EQ(m.original_score, 0.25);
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_EQ(m.min_map[i], 0.25);
    EXPECT_EQ(m.max_map[i], 0.25);
    EXPECT_EQ(m.avg_map[i], 0.25);
  }
}

TEST(ConfidenceMap, RedAtOriginAnalyticCase) {
  FunctionScorer red([](const Image& i) { return i(0, 0).r / 255.0; }, "red00");
  const Image img = make_uniform_image(3, 3, {0, 0, 0});
  const ConfidenceMap m = compute_confidence_map(img, red, ColorSet(85));
  EXPECT_EQ(m.min_map[0], 0.0);
  EXPECT_EQ(m.max_map[0], 1.0);
  EXPECT_NEAR(m.avg_map[0], 0.5, 1e-15);
  for (std::size_t i = 1; i < 9; ++i) {
    EXPECT_EQ(m.min_map[i], 0.0);
    EXPECT_EQ(m.max_map[i], 0.0);
  }
  EXPECT_EQ(m.scorer_id, "red00");
  EXPECT_EQ(m.color_step, 85);
}

TEST(ConfidenceMap, EqualsNaiveReference) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    BuiltinScorer scorer(random_weights(seed), "r");
    const Image img = make_noise_image(8, 8, seed);
    const ColorSet colors(85);
    expect_matches_naive(compute_confidence_map(img, scorer, colors),
                         oracle::naive_confidence_map(img, scorer, colors));
  }
}

TEST(ConfidenceMap, IndependentOfBatchSizeAndWorkers) {
  BuiltinScorer scorer("spotnet");
  const Image img = make_spot_image(12, 10, 3);
  const ColorSet colors(51);
  const ConfidenceMap ref = compute_confidence_map(img, scorer, colors, {4096, 1});
  for (ScanOptions o : {ScanOptions{1, 1}, ScanOptions{7, 1}, ScanOptions{216, 4},
                        ScanOptions{5000, 3}, ScanOptions{64, 16}}) {
    EXPECT_EQ(compute_confidence_map(img, scorer, colors, o), ref) << o.batch_size << "/" << o.workers;
  }
}

TEST(ConfidenceMap, InvariantsHoldOnSpotnet) {
  const ConfidenceMap m =
      compute_confidence_map(make_spot_image(16, 16, 4), ScorerSpec::builtin("spotnet"), ColorSet(85));
  EXPECT_EQ(check_map(m), "");
}

TEST(ConfidenceMap, CheckMapReportsViolations) {
  FunctionScorer constant([](const Image&) { return 0.5; }, "c");
  ConfidenceMap m = compute_confidence_map(make_uniform_image(2, 2), constant, ColorSet(255));
  ConfidenceMap bad = m;
  bad.min_map[1] = 0.6;
  EXPECT_NE(check_map(bad), "");
  bad = m;
  bad.max_map.pop_back();
  EXPECT_NE(check_map(bad), "");
  bad = m;
  bad.avg_map[3] = 1.5;
  EXPECT_NE(check_map(bad), "");
}

TEST(Scanner, ResumeFromAnyCutIsIdentical) {
  BuiltinScorer scorer("random:3");
  const Image img = make_noise_image(6, 6, 3);
  const ColorSet colors(85);
  const ConfidenceMap ref = compute_confidence_map(img, scorer, colors);
  testing_support::TempDir dir;
  for (std::uint64_t cut : {0u, 1u, 17u, 35u}) {
    ConfidenceScanner first(img, scorer, colors, ScanOptions{10, 2});
    first.advance(cut);
    EXPECT_EQ(first.completed_pixels(), cut);
    save_checkpoint(first.checkpoint(), dir / "ck");
    ConfidenceScanner second(img, scorer, colors, load_checkpoint(dir / "ck"), {33, 3});
    second.run();
    EXPECT_EQ(second.result(), ref) << cut;
  }
}

TEST(Scanner, ResultBeforeCompletionIsAnError) {
  FunctionScorer c([](const Image&) { return 0.5; }, "c");
  ConfidenceScanner s(make_uniform_image(3, 3), c, ColorSet(255));
  s.advance(4);
  EXPECT_FALSE(s.done());
  EXPECT_THROW(s.result(), ParameterError);
  s.advance(100);
  EXPECT_TRUE(s.done());
  EXPECT_NO_THROW(s.result());
}

TEST(Scanner, MismatchedCheckpointIsRejected) {
  BuiltinScorer scorer("spotnet");
  const Image img = make_spot_image(6, 6, 2);
  ConfidenceScanner s(img, scorer, ColorSet(85));
  s.advance(3);
  const ScanCheckpoint ck = s.checkpoint();
  EXPECT_THROW(ConfidenceScanner(img, scorer, ColorSet(51), ck), ConfigError);
  EXPECT_THROW(ConfidenceScanner(make_spot_image(6, 7, 2), scorer, ColorSet(85), ck), ConfigError);
  EXPECT_THROW(ConfidenceScanner(make_uniform_image(6, 6), scorer, ColorSet(85), ck), ConfigError);
  BuiltinScorer other("random:1");
  EXPECT_THROW(ConfidenceScanner(img, other, ColorSet(85), ck), ConfigError);
}

TEST(Scanner, FailingScorerLeavesAResumablePrefix) {
  int calls = 0;
  FunctionScorer flaky(
      [&](const Image& i) {
        if (++calls > 40) throw ScorerProtocolError("scorer went away");
        return i(0, 0).g / 255.0;
      },
      "flaky");
  const Image img = make_uniform_image(4, 4, {10, 10, 10});
  ConfidenceScanner s(img, flaky, ColorSet(255), ScanOptions{8, 1});
  try {
    s.run();
    FAIL() << "expected ScanError";
  } catch (const ScanError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kScorerProtocol);
    EXPECT_EQ(e.cursor(), s.completed_pixels());
    EXPECT_EQ(e.cursor(), 4u);  // 1 call for the original, then 8 per pixel
  }
  calls = -1000;
  s.run();
  EXPECT_TRUE(s.done());
  FunctionScorer steady([](const Image& i) { return i(0, 0).g / 255.0; }, "flaky");
  EXPECT_EQ(s.result(), compute_confidence_map(img, steady, ColorSet(255)));
}

TEST(MapFile, RoundTripIsBitExact) {
  testing_support::TempDir dir;
  const ConfidenceMap m =
      compute_confidence_map(make_spot_image(7, 5, 2), ScorerSpec::builtin("spotnet"), ColorSet(85));
  save_map(m, dir / "m.opcm");
  EXPECT_EQ(load_map(dir / "m.opcm"), m);
  EXPECT_EQ(encode_map(load_map(dir / "m.opcm")), encode_map(m));
  const auto bytes = testing_support::slurp(dir / "m.opcm");
  EXPECT_EQ(bytes.substr(0, 4), "OPCM");
  const std::size_t header = 4 + 2 + 2 + 4 + 4 + 8 + 4 + m.scorer_id.size();
  EXPECT_EQ(bytes.size(), header + 3 * 35 * 8);
}

TEST(MapFile, HeaderIsLittleEndian) {
  FunctionScorer c([](const Image&) { return 0.5; }, "ab");
  const auto bytes = encode_map(compute_confidence_map(make_uniform_image(3, 2), c, ColorSet(255)));
  const std::vector<std::uint8_t> head(bytes.begin(), bytes.begin() + 16);
  EXPECT_EQ(head, (std::vector<std::uint8_t>{'O', 'P', 'C', 'M', 1, 0, 255, 0, 3, 0, 0, 0, 2, 0, 0, 0}));
  double score;
  std::memcpy(&score, bytes.data() + 16, 8);
  EXPECT_EQ(score, 0.5);
}

TEST(MapFile, FormatErrors) {
  FunctionScorer c([](const Image&) { return 0.5; }, "c");
  const auto good = encode_map(compute_confidence_map(make_uniform_image(2, 2), c, ColorSet(255)));
  auto bad = good;
  bad[0] = 'X';
  EXPECT_THROW(decode_map(bad), FormatError);
  bad = good;
  bad[4] = 2;
  EXPECT_THROW(decode_map(bad), FormatError);
  bad = good;
  bad.pop_back();
  EXPECT_THROW(decode_map(bad), FormatError);
  bad = good;
  bad.push_back(0);
  EXPECT_THROW(decode_map(bad), FormatError);
  EXPECT_THROW(decode_map(std::span<const std::uint8_t>(good.data(), 3)), FormatError);
  EXPECT_THROW(load_map("/nonexistent/map.opcm"), IoError);
}

TEST(MapFile, CheckpointRejectsMapFiles) {
  testing_support::TempDir dir;
  FunctionScorer c([](const Image&) { return 0.5; }, "c");
  save_map(compute_confidence_map(make_uniform_image(2, 2), c, ColorSet(255)), dir / "m");
  EXPECT_THROW(load_checkpoint(dir / "m"), FormatError);
}

TEST(MapFile, Csv) {
  FunctionScorer red([](const Image& i) { return i(0, 0).r / 255.0; }, "red");
  const ConfidenceMap m = compute_confidence_map(make_uniform_image(2, 1, {0, 0, 0}), red, ColorSet(255));
  std::ostringstream out;
  write_map_csv(m, out);
  EXPECT_EQ(out.str(), "x,y,min,max,avg\n0,0,0,1,0.5\n1,0,0,0,0\n");
}

}  // namespace
}  // namespace pixelprobe
