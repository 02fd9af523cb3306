#include "pixelprobe/records.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "pixelprobe/error.hpp"

namespace pixelprobe {

namespace {

using nlohmann::json;

const json& field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw DataError(std::string("missing field \"") + key + "\"");
  return *it;
}

double score_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_number()) throw DataError(std::string("field \"") + key + "\" is not a number");
  const double s = v.get<double>();
  if (!(s >= 0.0 && s <= 1.0)) throw DataError(std::string("field \"") + key + "\" outside [0, 1]");
  return s;
}

template <typename T>
T unsigned_field(const json& obj, const char* key, std::uint64_t max) {
  const json& v = field(obj, key);
  if (!v.is_number_unsigned() || v.get<std::uint64_t>() > max) {
    throw DataError(std::string("field \"") + key + "\" is not an integer in [0, " +
                    std::to_string(max) + "]");
  }
  return static_cast<T>(v.get<std::uint64_t>());
}

}  // namespace

std::string to_json_line(const AttackRecord& r) {
  // nlohmann::ordered_json keeps the documented field order.
  nlohmann::ordered_json j;
  j["image_id"] = r.image_id;
  j["direction"] = std::string(to_string(r.direction));
  j["original_score"] = r.original_score;
  j["modified_score"] = r.modified_score;
  j["x"] = r.vector.x;
  j["y"] = r.vector.y;
  j["r"] = r.vector.r;
  j["g"] = r.vector.g;
  j["b"] = r.vector.b;
  j["neighborhood_mean"] = r.neighborhood_mean;
  j["generations_used"] = r.generations_used;
  j["seed"] = r.seed;
  return j.dump();
}

AttackRecord parse_record_line(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception&) {
    throw DataError("not a JSON object");
  }
  if (!j.is_object()) throw DataError("not a JSON object");

  AttackRecord r;
  const json& id = field(j, "image_id");
  if (!id.is_string()) throw DataError("field \"image_id\" is not a string");
  r.image_id = id.get<std::string>();
  const json& dir = field(j, "direction");
  if (!dir.is_string()) throw DataError("field \"direction\" is not a string");
  try {
    r.direction = parse_direction(dir.get<std::string>());
  } catch (const ParameterError& e) {
    throw DataError(e.what());
  }
  r.original_score = score_field(j, "original_score");
  r.modified_score = score_field(j, "modified_score");
  r.vector.x = unsigned_field<std::uint32_t>(j, "x", 0xffffffffULL);
  r.vector.y = unsigned_field<std::uint32_t>(j, "y", 0xffffffffULL);
  r.vector.r = unsigned_field<std::uint8_t>(j, "r", 255);
  r.vector.g = unsigned_field<std::uint8_t>(j, "g", 255);
  r.vector.b = unsigned_field<std::uint8_t>(j, "b", 255);
  const json& mean = field(j, "neighborhood_mean");
  if (!mean.is_array() || mean.size() != 3) {
    throw DataError("field \"neighborhood_mean\" is not a 3-element array");
  }
  for (std::size_t c = 0; c < 3; ++c) {
    if (!mean[c].is_number()) throw DataError("field \"neighborhood_mean\" holds a non-number");
    r.neighborhood_mean[c] = mean[c].get<double>();
  }
  r.generations_used = unsigned_field<int>(j, "generations_used", 0x7fffffff);
  r.seed = unsigned_field<std::uint64_t>(j, "seed", ~std::uint64_t{0});
  return r;
}

std::vector<AttackRecord> read_records(std::istream& in, std::string_view source_name) {
  std::vector<AttackRecord> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_record_line(line));
    } catch (const DataError& e) {
      throw DataError(std::string(source_name) + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

std::vector<AttackRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open records file");
  return read_records(in, path.string());
}

void write_records(std::ostream& out, const std::vector<AttackRecord>& records) {
  for (const AttackRecord& r : records) out << to_json_line(r) << '\n';
}

}  // namespace pixelprobe
