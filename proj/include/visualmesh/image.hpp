#ifndef VISUALMESH_IMAGE_HPP
#define VISUALMESH_IMAGE_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "onscreen.hpp"
#include "util/matrix.hpp"

namespace visualmesh {

/**
 * @brief An 8-bit interleaved raster, row-major, y then x then channel.
 */
struct Image {
  std::int32_t width = 0;
  std::int32_t height = 0;
  std::int32_t channels = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t& at(std::int32_t x, std::int32_t y, std::int32_t c) {
    return pixels[std::size_t(y) * std::size_t(width) * std::size_t(channels) + std::size_t(x) * std::size_t(channels)
                  + std::size_t(c)];
  }
  std::uint8_t at(std::int32_t x, std::int32_t y, std::int32_t c) const {
    return pixels[std::size_t(y) * std::size_t(width) * std::size_t(channels) + std::size_t(x) * std::size_t(channels)
                  + std::size_t(c)];
  }

  bool operator==(const Image&) const = default;
};

/**
 * @brief Sample the image at every visible node with nearest-pixel lookup.
 *
 * @return a (visible nodes + 1) x channels feature matrix, values scaled to [0, 1], with the
 *         final row being the all-zero sentinel
 */
inline Matrix<float> sample_image(const Image& image, const OnScreenMesh& onscreen) {
  if (image.width <= 0 || image.height <= 0 || image.channels <= 0
      || image.pixels.size() != std::size_t(image.width) * std::size_t(image.height) * std::size_t(image.channels)) {
    throw std::invalid_argument("sample_image: malformed image buffer");
  }

  Matrix<float> features(onscreen.size() + 1, std::size_t(image.channels));
  constexpr float scale = 1.0f / 255.0f;
  for (std::size_t i = 0; i < onscreen.size(); ++i) {
    const auto& pixel = onscreen.pixel_coords[i];
    if (pixel[0] < 0.0 || pixel[0] >= double(image.width) || pixel[1] < 0.0 || pixel[1] >= double(image.height)) {
      throw std::invalid_argument("sample_image: image dimensions do not match the projected mesh (node at "
                                  + std::to_string(pixel[0]) + "," + std::to_string(pixel[1]) + " outside "
                                  + std::to_string(image.width) + "x" + std::to_string(image.height) + ")");
    }
    // nearest pixel; coordinates right at the top edge round back into range
    auto x = std::int32_t(std::lround(pixel[0]));
    auto y = std::int32_t(std::lround(pixel[1]));
    x = x >= image.width ? image.width - 1 : x;
    y = y >= image.height ? image.height - 1 : y;
    for (std::int32_t c = 0; c < image.channels; ++c) {
      features[i][std::size_t(c)] = float(image.at(x, y, c)) * scale;
    }
  }
  // sentinel row is already zero from construction
  return features;
}

}  // namespace visualmesh

#endif  // VISUALMESH_IMAGE_HPP
