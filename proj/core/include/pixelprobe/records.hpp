#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pixelprobe/attack.hpp"

namespace pixelprobe {

/// One JSON object, no trailing newline. Fields: image_id, direction,
/// original_score, modified_score, x, y, r, g, b, neighborhood_mean
/// ([r, g, b]), generations_used, seed.
std::string to_json_line(const AttackRecord& record);

/// Throws DataError describing the offending field.
AttackRecord parse_record_line(std::string_view line);

/// Blank lines are skipped. Errors name the path and 1-based line number.
std::vector<AttackRecord> read_records(const std::filesystem::path& path);
std::vector<AttackRecord> read_records(std::istream& in, std::string_view source_name);

void write_records(std::ostream& out, const std::vector<AttackRecord>& records);

}  // namespace pixelprobe
