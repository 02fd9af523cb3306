#include <png.h>

#include <cstring>
#include <string>

#include "pixelprobe/error.hpp"
#include "pixelprobe/image.hpp"

namespace pixelprobe {

namespace {

// png_image owns internal state until png_image_free.
struct PngImage {
  png_image img;
  PngImage() {
    std::memset(&img, 0, sizeof(img));
    img.version = PNG_IMAGE_VERSION;
  }
  ~PngImage() { png_image_free(&img); }
  PngImage(const PngImage&) = delete;
  PngImage& operator=(const PngImage&) = delete;
};

}  // namespace

Image load_image(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw IoError(path.string() + ": no such file");
  }
  PngImage png;
  if (!png_image_begin_read_from_file(&png.img, path.c_str())) {
    throw FormatError(path.string() + ": not a readable PNG (" + png.img.message + ")");
  }
  if (png.img.format & PNG_FORMAT_FLAG_LINEAR) {
    throw FormatError(path.string() + ": unsupported bit depth (16-bit PNG)");
  }
  png.img.format = PNG_FORMAT_RGB;
  const std::uint32_t w = png.img.width;
  const std::uint32_t h = png.img.height;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(png.img));
  if (!png_image_finish_read(&png.img, nullptr, buffer.data(), 0, nullptr)) {
    throw FormatError(path.string() + ": corrupt PNG (" + png.img.message + ")");
  }
  std::vector<Rgb> pixels(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    pixels[i] = {buffer[3 * i], buffer[3 * i + 1], buffer[3 * i + 2]};
  }
  return Image(w, h, std::move(pixels));
}

void save_image(const Image& image, const std::filesystem::path& path) {
  if (image.empty()) throw DimensionError(path.string() + ": cannot save an empty image");
  std::vector<std::uint8_t> buffer(image.pixel_count() * 3);
  const auto px = image.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    buffer[3 * i] = px[i].r;
    buffer[3 * i + 1] = px[i].g;
    buffer[3 * i + 2] = px[i].b;
  }
  PngImage png;
  png.img.width = image.width();
  png.img.height = image.height();
  png.img.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&png.img, path.c_str(), 0, buffer.data(), 0, nullptr)) {
    throw IoError(path.string() + ": cannot write PNG (" + png.img.message + ")");
  }
}

}  // namespace pixelprobe
