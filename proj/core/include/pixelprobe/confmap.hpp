#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pixelprobe/error.hpp"
#include "pixelprobe/image.hpp"
#include "pixelprobe/scorer.hpp"

namespace pixelprobe {

/// Per-pixel min/max/mean of the scores of every single-pixel color
/// substitution drawn from a ColorSet.
struct ConfidenceMap {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  double original_score = 0.0;
  std::vector<double> min_map;
  std::vector<double> max_map;
  std::vector<double> avg_map;
  int color_step = 1;
  std::string scorer_id;

  std::size_t index(std::uint32_t x, std::uint32_t y) const noexcept {
    return static_cast<std::size_t>(y) * width + x;
  }
  double swing(std::uint32_t x, std::uint32_t y) const noexcept {
    return max_map[index(x, y)] - min_map[index(x, y)];
  }

  friend bool operator==(const ConfidenceMap&, const ConfidenceMap&) = default;
};

/// Returns an empty string when the map is consistent, otherwise a
/// description of the first violated invariant (sizes, 0 <= min <= avg <=
/// max <= 1).
std::string check_map(const ConfidenceMap& map);

/// width * height * |colors|.
std::uint64_t planned_vector_count(const ColorSet& colors, std::uint32_t width,
                                   std::uint32_t height);

/// Position inside the enumeration: pixel index (row-major) and color index.
struct EnumerationCursor {
  std::uint64_t pixel = 0;
  std::uint64_t color = 0;

  friend constexpr bool operator==(const EnumerationCursor&, const EnumerationCursor&) = default;
};

/// Streams attack vectors pixel-major (row-major), color-grid order inside.
class VectorEnumerator {
 public:
  VectorEnumerator(const ColorSet& colors, std::uint32_t width, std::uint32_t height,
                   EnumerationCursor start = {});

  std::uint64_t total() const noexcept;
  std::uint64_t position() const noexcept;
  EnumerationCursor cursor() const noexcept { return cursor_; }
  bool done() const noexcept { return cursor_.pixel >= pixels_; }

  std::optional<AttackVector> next();
  /// Fills up to out.size() vectors, stopping at `end_pixel`; returns count.
  std::size_t fill(std::span<AttackVector> out, std::uint64_t end_pixel);

 private:
  const ColorSet* colors_;
  std::uint32_t width_;
  std::uint64_t pixels_;
  EnumerationCursor cursor_;
};

struct ScanOptions {
  std::size_t batch_size = 4096;
  unsigned workers = 1;
};

/// Partial scan state; pixels [0, completed_pixels) of `partial` are final.
struct ScanCheckpoint {
  ConfidenceMap partial;
  std::uint64_t completed_pixels = 0;

  friend bool operator==(const ScanCheckpoint&, const ScanCheckpoint&) = default;
};

/// Raised when a scan stops on an error; `cursor()` is the number of leading
/// pixels that are complete and can be resumed from.
class ScanError : public Error {
 public:
  ScanError(ErrorKind kind, const std::string& what, std::uint64_t cursor)
      : Error(kind, what), cursor_(cursor) {}
  std::uint64_t cursor() const noexcept { return cursor_; }

 private:
  std::uint64_t cursor_;
};

/// Incremental brute-force scan. Work is sharded by pixel; every worker owns
/// a forked scorer session and writes disjoint map cells, so the result does
/// not depend on worker count or batch size.
class ConfidenceScanner {
 public:
  ConfidenceScanner(const Image& image, Scorer& scorer, const ColorSet& colors,
                    ScanOptions options = {});
  /// Continues a checkpoint. Throws ConfigError when it was taken for a
  /// different image size, color step, scorer, or original score.
  ConfidenceScanner(const Image& image, Scorer& scorer, const ColorSet& colors,
                    ScanCheckpoint checkpoint, ScanOptions options = {});
  ~ConfidenceScanner();

  ConfidenceScanner(const ConfidenceScanner&) = delete;
  ConfidenceScanner& operator=(const ConfidenceScanner&) = delete;

  std::uint64_t total_pixels() const noexcept { return total_; }
  std::uint64_t completed_pixels() const noexcept { return state_.completed_pixels; }
  bool done() const noexcept { return completed_pixels() == total_; }
  double original_score() const noexcept { return state_.partial.original_score; }

  /// Scans up to `max_pixels` more pixels. On failure throws ScanError whose
  /// cursor equals completed_pixels() afterwards.
  void advance(std::uint64_t max_pixels);
  void run() { advance(total_ - completed_pixels()); }

  const ScanCheckpoint& checkpoint() const noexcept { return state_; }
  /// Throws ParameterError if the scan is not finished.
  ConfidenceMap result() const;

 private:
  void scan_range(Scorer& session, std::uint64_t begin, std::uint64_t end,
                  std::vector<AttackVector>& batch, std::vector<double>& scores,
                  std::uint64_t& finished);

  Image image_;
  Scorer& scorer_;
  ColorSet colors_;
  ScanOptions options_;
  std::uint64_t total_;
  ScanCheckpoint state_;
  std::vector<std::unique_ptr<Scorer>> extra_sessions_;
};

ConfidenceMap compute_confidence_map(const Image& image, Scorer& scorer,
                                     const ColorSet& colors, ScanOptions options = {});
ConfidenceMap compute_confidence_map(const Image& image, const ScorerSpec& spec,
                                     const ColorSet& colors, ScanOptions options = {});

/// Binary "OPCM" v1, little-endian: magic, u16 version, u16 color_step,
/// u32 width, u32 height, f64 original_score, u32 id length + UTF-8 id, then
/// min, max, avg as row-major f64 arrays.
void save_map(const ConfidenceMap& map, const std::filesystem::path& path);
ConfidenceMap load_map(const std::filesystem::path& path);
std::vector<std::uint8_t> encode_map(const ConfidenceMap& map);
/// Throws FormatError on bad magic, version mismatch, truncation, or
/// trailing bytes.
ConfidenceMap decode_map(std::span<const std::uint8_t> bytes);

/// "OPCK" v1: the OPCM payload followed by a u64 completed-pixel count.
/// Saving is atomic (temporary file + rename).
void save_checkpoint(const ScanCheckpoint& checkpoint, const std::filesystem::path& path);
ScanCheckpoint load_checkpoint(const std::filesystem::path& path);

/// Header x,y,min,max,avg; one row per pixel, row-major.
void write_map_csv(const ConfidenceMap& map, std::ostream& out);

}  // namespace pixelprobe
