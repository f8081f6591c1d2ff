#ifndef VISUALMESH_TOOLS_OVERLAY_HPP
#define VISUALMESH_TOOLS_OVERLAY_HPP

#include <array>
#include <cmath>
#include <cstdint>

#include <visualmesh/image.hpp>
#include <visualmesh/onscreen.hpp>

namespace vmcli {

using Color = std::array<std::uint8_t, 3>;

inline visualmesh::Image to_rgb(const visualmesh::Image& image) {
  if (image.channels == 3) {
    return image;
  }
  visualmesh::Image rgb;
  rgb.width = image.width;
  rgb.height = image.height;
  rgb.channels = 3;
  rgb.pixels.resize(std::size_t(image.width) * std::size_t(image.height) * 3);
  for (std::int32_t y = 0; y < image.height; ++y) {
    for (std::int32_t x = 0; x < image.width; ++x) {
      const std::uint8_t v = image.at(x, y, 0);
      rgb.at(x, y, 0) = v;
      rgb.at(x, y, 1) = v;
      rgb.at(x, y, 2) = v;
    }
  }
  return rgb;
}

inline void put_pixel(visualmesh::Image& image, std::int32_t x, std::int32_t y, const Color& color) {
  if (x < 0 || x >= image.width || y < 0 || y >= image.height) {
    return;
  }
  image.at(x, y, 0) = color[0];
  image.at(x, y, 1) = color[1];
  image.at(x, y, 2) = color[2];
}

/// 3 px square dot
inline void draw_dot(visualmesh::Image& image, double cx, double cy, const Color& color) {
  const auto x = std::int32_t(std::lround(cx));
  const auto y = std::int32_t(std::lround(cy));
  for (std::int32_t dy = -1; dy <= 1; ++dy) {
    for (std::int32_t dx = -1; dx <= 1; ++dx) {
      put_pixel(image, x + dx, y + dy, color);
    }
  }
}

/// 1 px Bresenham line
inline void draw_line(visualmesh::Image& image, double ax, double ay, double bx, double by, const Color& color) {
  auto x0 = std::int32_t(std::lround(ax));
  auto y0 = std::int32_t(std::lround(ay));
  const auto x1 = std::int32_t(std::lround(bx));
  const auto y1 = std::int32_t(std::lround(by));
  const std::int32_t dx = std::abs(x1 - x0);
  const std::int32_t dy = -std::abs(y1 - y0);
  const std::int32_t sx = x0 < x1 ? 1 : -1;
  const std::int32_t sy = y0 < y1 ? 1 : -1;
  std::int32_t err = dx + dy;
  for (;;) {
    put_pixel(image, x0, y0, color);
    if (x0 == x1 && y0 == y1) {
      break;
    }
    const std::int32_t doubled = 2 * err;
    if (doubled >= dy) {
      err += dy;
      x0 += sx;
    }
    if (doubled <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

/// Draw every visible edge once, then the node dots on top.
inline void draw_mesh_overlay(visualmesh::Image& image,
                              const visualmesh::OnScreenMesh& onscreen,
                              const Color& edge_color,
                              const Color& node_color) {
  for (std::size_t i = 0; i < onscreen.size(); ++i) {
    for (const std::uint64_t neighbor : onscreen.neighbors[i]) {
      if (neighbor != onscreen.sentinel() && neighbor > i) {
        draw_line(image, onscreen.pixel_coords[i][0], onscreen.pixel_coords[i][1],
                  onscreen.pixel_coords[neighbor][0], onscreen.pixel_coords[neighbor][1], edge_color);
      }
    }
  }
  for (const auto& pixel : onscreen.pixel_coords) {
    draw_dot(image, pixel[0], pixel[1], node_color);
  }
}

}  // namespace vmcli

#endif  // VISUALMESH_TOOLS_OVERLAY_HPP
