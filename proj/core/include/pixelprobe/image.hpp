#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace pixelprobe {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend constexpr bool operator==(const Rgb&, const Rgb&) = default;
};

/// Row-major RGB8 raster. Value type: copies are deep, and every mutating
/// operation in the public API returns a new image.
class Image {
 public:
  Image() = default;
  Image(std::uint32_t width, std::uint32_t height, Rgb fill = {});
  /// Throws DimensionError if pixels.size() != width * height.
  Image(std::uint32_t width, std::uint32_t height, std::vector<Rgb> pixels);

  std::uint32_t width() const noexcept { return width_; }
  std::uint32_t height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept { return pixels_.size(); }
  bool empty() const noexcept { return pixels_.empty(); }

  bool contains(std::int64_t x, std::int64_t y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  /// Unchecked access.
  const Rgb& operator()(std::uint32_t x, std::uint32_t y) const noexcept {
    return pixels_[static_cast<std::size_t>(y) * width_ + x];
  }
  Rgb& operator()(std::uint32_t x, std::uint32_t y) noexcept {
    return pixels_[static_cast<std::size_t>(y) * width_ + x];
  }

  /// Bounds-checked access; throws BoundsError.
  const Rgb& at(std::uint32_t x, std::uint32_t y) const;

  std::span<const Rgb> pixels() const noexcept { return pixels_; }
  std::span<Rgb> pixels() noexcept { return pixels_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::uint32_t width_ = 0;
  std::uint32_t height_ = 0;
  std::vector<Rgb> pixels_;
};

/// Single-pixel perturbation candidate.
struct AttackVector {
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  Rgb color() const noexcept { return {r, g, b}; }
  friend constexpr bool operator==(const AttackVector&, const AttackVector&) = default;
};

/// Returns a copy of `image` with pixel (v.x, v.y) replaced by v's color.
/// Throws BoundsError when the vector lies outside the image.
Image apply_attack(const Image& image, const AttackVector& v);

/// Quantized color set: every channel takes the multiples of `step` in
/// [0, 255]. Colors are indexed r-major, then g, then b, each ascending.
class ColorSet {
 public:
  /// Throws ParameterError unless 1 <= step <= 255.
  explicit ColorSet(int step);

  int step() const noexcept { return step_; }
  std::span<const std::uint8_t> channel_values() const noexcept { return values_; }
  std::size_t values_per_channel() const noexcept { return values_.size(); }
  std::size_t size() const noexcept { return values_.size() * values_.size() * values_.size(); }

  /// Color at enumeration index i (i < size()).
  Rgb operator[](std::size_t i) const noexcept {
    const std::size_t n = values_.size();
    return {values_[i / (n * n)], values_[(i / n) % n], values_[i % n]};
  }

  bool contains(const Rgb& c) const noexcept {
    return c.r % step_ == 0 && c.g % step_ == 0 && c.b % step_ == 0;
  }

 private:
  int step_;
  std::vector<std::uint8_t> values_;
};

ColorSet color_grid(int step);

/// Per-channel mean over the in-bounds pixels within Chebyshev distance
/// `radius` of (x, y), center excluded. Throws BoundsError for an
/// out-of-image center and ParameterError for radius < 1 or a 1x1 image.
std::array<double, 3> neighborhood_mean(const Image& image, std::uint32_t x,
                                        std::uint32_t y, int radius = 1);

/// PNG I/O. 8-bit gray/palette/RGB/RGBA inputs are accepted and expanded to
/// RGB; alpha is dropped. 16-bit files are rejected. Errors carry the path.
Image load_image(const std::filesystem::path& path);
void save_image(const Image& image, const std::filesystem::path& path);

}  // namespace pixelprobe
