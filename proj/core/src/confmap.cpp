#include "pixelprobe/confmap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

namespace pixelprobe {

std::string check_map(const ConfidenceMap& m) {
  const std::size_t n = static_cast<std::size_t>(m.width) * m.height;
  if (m.min_map.size() != n || m.max_map.size() != n || m.avg_map.size() != n) {
    return "map arrays do not match " + std::to_string(m.width) + "x" + std::to_string(m.height);
  }
  if (!(m.original_score >= 0.0 && m.original_score <= 1.0)) return "original score outside [0, 1]";
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = m.min_map[i], avg = m.avg_map[i], hi = m.max_map[i];
    if (!(0.0 <= lo && lo <= avg && avg <= hi && hi <= 1.0)) {
      return "pixel (" + std::to_string(i % m.width) + ", " + std::to_string(i / m.width) +
             ") violates 0 <= min <= avg <= max <= 1";
    }
  }
  return {};
}

std::uint64_t planned_vector_count(const ColorSet& colors, std::uint32_t width,
                                   std::uint32_t height) {
  return std::uint64_t{width} * height * colors.size();
}

// ---------------------------------------------------------------------------
// VectorEnumerator

VectorEnumerator::VectorEnumerator(const ColorSet& colors, std::uint32_t width,
                                   std::uint32_t height, EnumerationCursor start)
    : colors_(&colors), width_(width), pixels_(std::uint64_t{width} * height), cursor_(start) {
  if (cursor_.color >= colors.size()) {
    throw ParameterError("enumeration cursor color index " + std::to_string(cursor_.color) +
                         " >= " + std::to_string(colors.size()));
  }
  if (cursor_.pixel > pixels_) throw ParameterError("enumeration cursor past the last pixel");
}

std::uint64_t VectorEnumerator::total() const noexcept { return pixels_ * colors_->size(); }

std::uint64_t VectorEnumerator::position() const noexcept {
  return cursor_.pixel * colors_->size() + cursor_.color;
}

std::optional<AttackVector> VectorEnumerator::next() {
  AttackVector v;
  if (fill(std::span<AttackVector>(&v, 1), pixels_) == 0) return std::nullopt;
  return v;
}

std::size_t VectorEnumerator::fill(std::span<AttackVector> out, std::uint64_t end_pixel) {
  end_pixel = std::min(end_pixel, pixels_);
  const std::uint64_t ncolors = colors_->size();
  std::size_t n = 0;
  while (n < out.size() && cursor_.pixel < end_pixel) {
    const Rgb c = (*colors_)[cursor_.color];
    out[n++] = {static_cast<std::uint32_t>(cursor_.pixel % width_),
                static_cast<std::uint32_t>(cursor_.pixel / width_), c.r, c.g, c.b};
    if (++cursor_.color == ncolors) {
      cursor_.color = 0;
      ++cursor_.pixel;
    }
  }
  return n;
}

// ---------------------------------------------------------------------------
// ConfidenceScanner

namespace {

ScanCheckpoint fresh_state(const Image& image, Scorer& scorer, const ColorSet& colors) {
  ScanCheckpoint s;
  ConfidenceMap& m = s.partial;
  m.width = image.width();
  m.height = image.height();
  m.color_step = colors.step();
  m.scorer_id = scorer.id();
  m.original_score = scorer.score(image);
  m.min_map.assign(image.pixel_count(), 0.0);
  m.max_map.assign(image.pixel_count(), 0.0);
  m.avg_map.assign(image.pixel_count(), 0.0);
  return s;
}

void validate_inputs(const Image& image, const ScanOptions& options) {
  if (image.empty()) throw DimensionError("cannot scan an empty image");
  if (options.batch_size < 1) throw ParameterError("batch_size must be >= 1");
  if (options.workers < 1) throw ParameterError("workers must be >= 1");
}

}  // namespace

ConfidenceScanner::ConfidenceScanner(const Image& image, Scorer& scorer, const ColorSet& colors,
                                     ScanOptions options)
    : image_(image), scorer_(scorer), colors_(colors), options_(options),
      total_(image.pixel_count()) {
  validate_inputs(image, options);
  state_ = fresh_state(image, scorer, colors);
}

ConfidenceScanner::ConfidenceScanner(const Image& image, Scorer& scorer, const ColorSet& colors,
                                     ScanCheckpoint checkpoint, ScanOptions options)
    : image_(image), scorer_(scorer), colors_(colors), options_(options),
      total_(image.pixel_count()), state_(std::move(checkpoint)) {
  validate_inputs(image, options);
  const ConfidenceMap& m = state_.partial;
  if (m.width != image.width() || m.height != image.height()) {
    throw ConfigError("checkpoint is for a " + std::to_string(m.width) + "x" +
                      std::to_string(m.height) + " image");
  }
  if (m.color_step != colors.step()) {
    throw ConfigError("checkpoint used color step " + std::to_string(m.color_step));
  }
  if (m.scorer_id != scorer.id()) throw ConfigError("checkpoint was made with " + m.scorer_id);
  if (state_.completed_pixels > total_) throw ConfigError("checkpoint cursor past the last pixel");
  if (scorer.score(image) != m.original_score) {
    throw ConfigError("checkpoint original score does not match this image and scorer");
  }
}

ConfidenceScanner::~ConfidenceScanner() = default;

void ConfidenceScanner::scan_range(Scorer& session, std::uint64_t begin, std::uint64_t end,
                                   std::vector<AttackVector>& batch, std::vector<double>& scores,
                                   std::uint64_t& finished) {
  ConfidenceMap& m = state_.partial;
  const std::uint64_t ncolors = colors_.size();
  VectorEnumerator en(colors_, image_.width(), image_.height(), {begin, 0});
  batch.resize(options_.batch_size);

  std::uint64_t pixel = begin;
  std::uint64_t seen = 0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  while (pixel < end) {
    const std::size_t n = en.fill(batch, end);
    scores = session.score_perturbations(image_, std::span<const AttackVector>(batch.data(), n));
    for (std::size_t k = 0; k < n; ++k) {
      const double s = scores[k];
      lo = std::min(lo, s);
      hi = std::max(hi, s);
      sum += s;
      if (++seen == ncolors) {
        // Rounding in the sum can push the mean a few ulps outside [lo, hi].
        const double avg = std::clamp(sum / static_cast<double>(ncolors), lo, hi);
        m.min_map[pixel] = lo;
        m.max_map[pixel] = hi;
        m.avg_map[pixel] = avg;
        ++pixel;
        ++finished;
        seen = 0;
        lo = std::numeric_limits<double>::infinity();
        hi = -std::numeric_limits<double>::infinity();
        sum = 0.0;
      }
    }
  }
}

void ConfidenceScanner::advance(std::uint64_t max_pixels) {
  const std::uint64_t begin = state_.completed_pixels;
  const std::uint64_t end = begin + std::min(max_pixels, total_ - begin);
  if (begin == end) return;

  // Shards of whole pixels. Each records how many of its leading pixels are
  // final, so the resumable prefix survives a failure mid-shard.
  constexpr std::uint64_t kShard = 16;
  const std::uint64_t shards = (end - begin + kShard - 1) / kShard;
  std::vector<std::uint64_t> shard_done(shards, 0);
  std::atomic<std::uint64_t> next_shard{0};
  std::atomic<bool> stop{false};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto worker = [&](Scorer& session) {
    std::vector<AttackVector> batch;
    std::vector<double> scores;
    while (!stop.load(std::memory_order_relaxed)) {
      const std::uint64_t s = next_shard.fetch_add(1);
      if (s >= shards) return;
      const std::uint64_t lo = begin + s * kShard;
      const std::uint64_t hi = std::min(end, lo + kShard);
      try {
        scan_range(session, lo, hi, batch, scores, shard_done[s]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        stop = true;
        return;
      }
    }
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(options_.workers, shards));
  if (workers <= 1) {
    worker(scorer_);
  } else {
    while (extra_sessions_.size() + 1 < workers) extra_sessions_.push_back(scorer_.fork());
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker, std::ref(*extra_sessions_[w - 1]));
    worker(scorer_);
  }

  std::uint64_t completed = begin;
  for (std::uint64_t s = 0; s < shards; ++s) {
    completed += shard_done[s];
    if (shard_done[s] < std::min(end, begin + (s + 1) * kShard) - (begin + s * kShard)) break;
  }
  state_.completed_pixels = completed;

  if (error) {
    const std::uint64_t cursor = state_.completed_pixels;
    try {
      std::rethrow_exception(error);
    } catch (const Error& e) {
      throw ScanError(e.kind(), "scan stopped at pixel cursor " + std::to_string(cursor) + ": " +
                                    e.what(), cursor);
    }
  }
}

ConfidenceMap ConfidenceScanner::result() const {
  if (!done()) {
    throw ParameterError("scan incomplete: " + std::to_string(completed_pixels()) + " of " +
                         std::to_string(total_) + " pixels");
  }
  return state_.partial;
}

ConfidenceMap compute_confidence_map(const Image& image, Scorer& scorer, const ColorSet& colors,
                                     ScanOptions options) {
  ConfidenceScanner scanner(image, scorer, colors, options);
  scanner.run();
  return scanner.result();
}

ConfidenceMap compute_confidence_map(const Image& image, const ScorerSpec& spec,
                                     const ColorSet& colors, ScanOptions options) {
  auto scorer = make_scorer(spec);
  return compute_confidence_map(image, *scorer, colors, options);
}

}  // namespace pixelprobe
