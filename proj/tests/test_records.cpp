#include <gtest/gtest.h>

#include <sstream>

#include "pixelprobe/error.hpp"
#include "pixelprobe/records.hpp"
#include "test_support.hpp"

namespace pixelprobe {
namespace {

AttackRecord sample(int i) {
  AttackRecord r;
  r.image_id = "slide-" + std::to_string(i) + ".png";
  r.direction = i % 2 ? Direction::kMaximize : Direction::kMinimize;
  r.original_score = 0.98 - 0.01 * i;
  r.modified_score = 0.1 / (i + 3);
  r.vector = {static_cast<std::uint32_t>(i), 63, 255, 0, static_cast<std::uint8_t>(i * 7)};
  r.neighborhood_mean = {230.125, 200.0 / 3.0, 1e-300};
  r.generations_used = 100 - i;
  r.seed = 0xFFFFFFFFFFFFFFFFull - static_cast<std::uint64_t>(i);
  return r;
}

TEST(Records, JsonLineFieldOrder) {
  AttackRecord r;
  r.image_id = "a";
  r.original_score = 1.0;
  r.modified_score = 0.5;
  r.vector = {1, 2, 3, 4, 5};
  r.neighborhood_mean = {1, 2, 3};
  r.generations_used = 7;
  r.seed = 9;
  EXPECT_EQ(to_json_line(r),
            R"({"image_id":"a","direction":"minimize","original_score":1.0,"modified_score":0.5,)"
            R"("x":1,"y":2,"r":3,"g":4,"b":5,"neighborhood_mean":[1.0,2.0,3.0],)"
            R"("generations_used":7,"seed":9})");
}

TEST(Records, RoundTripIsExact) {
  for (int i = 0; i < 20; ++i) EXPECT_EQ(parse_record_line(to_json_line(sample(i))), sample(i));
}

TEST(Records, FileRoundTripSkipsBlankLines) {
  testing_support::TempDir dir;
  std::vector<AttackRecord> rs{sample(0), sample(1), sample(2)};
  {
    std::ofstream out(dir / "r.jsonl");
    write_records(out, rs);
    out << "\n   \n";
  }
  EXPECT_EQ(read_records(dir / "r.jsonl"), rs);
}

TEST(Records, ErrorsNameSourceAndLine) {
  std::istringstream in(to_json_line(sample(0)) + "\n\n{\"image_id\": 3}\n");
  try {
    read_records(in, "batch.jsonl");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("batch.jsonl:3"), std::string::npos) << e.what();
  }
}

TEST(Records, MalformedFieldsAreRejected) {
  const std::string good = to_json_line(sample(0));
  auto replaced = [&](const std::string& from, const std::string& to) {
    std::string s = good;
    s.replace(s.find(from), from.size(), to);
    return s;
  };
  EXPECT_THROW(parse_record_line("not json"), DataError);
  EXPECT_THROW(parse_record_line("[1,2]"), DataError);
  EXPECT_THROW(parse_record_line(replaced("\"minimize\"", "\"sideways\"")), DataError);
  EXPECT_THROW(parse_record_line(replaced("\"r\":255", "\"r\":256")), DataError);
  EXPECT_THROW(parse_record_line(replaced("\"x\":0", "\"x\":-1")), DataError);
  EXPECT_THROW(parse_record_line(replaced("\"seed\"", "\"sead\"")), DataError);
}

TEST(Records, MissingFileIsAnIoError) {
  EXPECT_THROW(read_records("/nonexistent/records.jsonl"), IoError);
}

}  // namespace
}  // namespace pixelprobe
