#include "pixelprobe/image.hpp"

#include <algorithm>
#include <string>

#include "pixelprobe/error.hpp"

namespace pixelprobe {

namespace {

std::string coord_text(std::int64_t x, std::int64_t y) {
  return "(" + std::to_string(x) + ", " + std::to_string(y) + ")";
}

}  // namespace

Image::Image(std::uint32_t width, std::uint32_t height, Rgb fill)
    : width_(width), height_(height),
      pixels_(static_cast<std::size_t>(width) * height, fill) {}

Image::Image(std::uint32_t width, std::uint32_t height, std::vector<Rgb> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (pixels_.size() != static_cast<std::size_t>(width) * height) {
    throw DimensionError("image buffer holds " + std::to_string(pixels_.size()) +
                         " pixels, expected " + std::to_string(width) + "x" +
                         std::to_string(height));
  }
}

const Rgb& Image::at(std::uint32_t x, std::uint32_t y) const {
  if (!contains(x, y)) {
    throw BoundsError("pixel " + coord_text(x, y) + " outside " + std::to_string(width_) +
                      "x" + std::to_string(height_) + " image");
  }
  return (*this)(x, y);
}

Image apply_attack(const Image& image, const AttackVector& v) {
  if (!image.contains(v.x, v.y)) {
    throw BoundsError("attack vector at " + coord_text(v.x, v.y) + " outside " +
                      std::to_string(image.width()) + "x" + std::to_string(image.height()) +
                      " image");
  }
  Image out = image;
  out(v.x, v.y) = v.color();
  return out;
}

ColorSet::ColorSet(int step) : step_(step) {
  if (step < 1 || step > 255) {
    throw ParameterError("color step must be in [1, 255], got " + std::to_string(step));
  }
  for (int v = 0; v <= 255; v += step) values_.push_back(static_cast<std::uint8_t>(v));
}

ColorSet color_grid(int step) { return ColorSet(step); }

std::array<double, 3> neighborhood_mean(const Image& image, std::uint32_t x, std::uint32_t y,
                                        int radius) {
  if (!image.contains(x, y)) {
    throw BoundsError("neighborhood center " + coord_text(x, y) + " outside image");
  }
  if (radius < 1) {
    throw ParameterError("neighborhood radius must be >= 1, got " + std::to_string(radius));
  }
  const std::int64_t x0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(x) - radius);
  const std::int64_t y0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(y) - radius);
  const std::int64_t x1 = std::min<std::int64_t>(image.width() - 1, std::int64_t{x} + radius);
  const std::int64_t y1 = std::min<std::int64_t>(image.height() - 1, std::int64_t{y} + radius);

  std::array<double, 3> sum{};
  std::size_t n = 0;
  for (std::int64_t yy = y0; yy <= y1; ++yy) {
    for (std::int64_t xx = x0; xx <= x1; ++xx) {
      if (xx == x && yy == y) continue;
      const Rgb& p = image(static_cast<std::uint32_t>(xx), static_cast<std::uint32_t>(yy));
      sum[0] += p.r;
      sum[1] += p.g;
      sum[2] += p.b;
      ++n;
    }
  }
  if (n == 0) throw ParameterError("1x1 image has no neighbors");
  for (double& s : sum) s /= static_cast<double>(n);
  return sum;
}

}  // namespace pixelprobe
