#pragma once

#include <cstdint>

#include "pixelprobe/image.hpp"

namespace pixelprobe {

/// H&E-like palette used by the synthetic fixtures.
inline constexpr Rgb kTissueBackground{230, 200, 220};
inline constexpr Rgb kNucleusDark{70, 40, 110};

/// Disc of `spot` color (all pixels with (x-cx)^2 + (y-cy)^2 <= r^2, center at
/// (width/2, height/2)) on a uniform `background`.
Image make_spot_image(std::uint32_t width, std::uint32_t height, double radius,
                      Rgb background = kTissueBackground, Rgb spot = kNucleusDark);

Image make_uniform_image(std::uint32_t width, std::uint32_t height,
                         Rgb color = kTissueBackground);

/// Every channel drawn uniformly from SplitMix64(seed), row-major r, g, b.
Image make_noise_image(std::uint32_t width, std::uint32_t height, std::uint64_t seed);

}  // namespace pixelprobe
