#include "pixelprobe/synthetic.hpp"

#include "pixelprobe/random.hpp"

namespace pixelprobe {

Image make_spot_image(std::uint32_t width, std::uint32_t height, double radius, Rgb background,
                      Rgb spot) {
  Image img(width, height, background);
  const double cx = width / 2.0;
  const double cy = height / 2.0;
  for (std::uint32_t y = 0; y < height; ++y) {
    for (std::uint32_t x = 0; x < width; ++x) {
      const double dx = x - cx;
      const double dy = y - cy;
      if (dx * dx + dy * dy <= radius * radius) img(x, y) = spot;
    }
  }
  return img;
}

Image make_uniform_image(std::uint32_t width, std::uint32_t height, Rgb color) {
  return Image(width, height, color);
}

Image make_noise_image(std::uint32_t width, std::uint32_t height, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Image img(width, height);
  for (Rgb& p : img.pixels()) {
    p.r = static_cast<std::uint8_t>(rng.index(256));
    p.g = static_cast<std::uint8_t>(rng.index(256));
    p.b = static_cast<std::uint8_t>(rng.index(256));
  }
  return img;
}

}  // namespace pixelprobe
