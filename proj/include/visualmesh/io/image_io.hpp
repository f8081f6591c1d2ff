#ifndef VISUALMESH_IO_IMAGE_IO_HPP
#define VISUALMESH_IO_IMAGE_IO_HPP

#include <cstring>
#include <fstream>
#include <string>

#include <png.h>

#include "../image.hpp"

namespace visualmesh {
namespace io {

  namespace detail {
    inline bool has_extension(const std::string& path, const char* extension) {
      const std::size_t n = std::strlen(extension);
      if (path.size() < n) {
        return false;
      }
      for (std::size_t i = 0; i < n; ++i) {
        const char a = path[path.size() - n + i];
        const char b = extension[i];
        if ((a >= 'A' && a <= 'Z' ? char(a - 'A' + 'a') : a) != b) {
          return false;
        }
      }
      return true;
    }
  }  // namespace detail

  /// Binary PPM (P6), 8 bits per channel.
  inline void write_ppm(const Image& image, const std::string& path) {
    if (image.channels != 3) {
      throw std::invalid_argument("write_ppm: P6 requires 3 channels");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw std::runtime_error("write_ppm: cannot open " + path);
    }
    out << "P6\n" << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()), std::streamsize(image.pixels.size()));
    if (!out) {
      throw std::runtime_error("write_ppm: write failed for " + path);
    }
  }

  inline Image read_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw std::runtime_error("read_ppm: cannot open " + path);
    }
    std::string magic;
    in >> magic;
    if (magic != "P6") {
      throw std::runtime_error("read_ppm: " + path + " is not a binary P6 file");
    }
    // header tokens may be separated by comments
    auto next_int = [&in, &path]() {
      for (;;) {
        int c = in.peek();
        if (c == '#') {
          std::string comment;
          std::getline(in, comment);
        }
        else if (std::isspace(c)) {
          in.get();
        }
        else {
          break;
        }
      }
      long value = -1;
      in >> value;
      if (!in || value < 0) {
        throw std::runtime_error("read_ppm: malformed header in " + path);
      }
      return value;
    };
    const long width = next_int();
    const long height = next_int();
    const long maxval = next_int();
    if (maxval != 255) {
      throw std::runtime_error("read_ppm: only 8-bit files supported, maxval=" + std::to_string(maxval));
    }
    in.get();  // single whitespace after maxval

    Image image;
    image.width = std::int32_t(width);
    image.height = std::int32_t(height);
    image.channels = 3;
    image.pixels.resize(std::size_t(width) * std::size_t(height) * 3);
    if (!in.read(reinterpret_cast<char*>(image.pixels.data()), std::streamsize(image.pixels.size()))) {
      throw std::runtime_error("read_ppm: truncated pixel data in " + path);
    }
    return image;
  }

  /// 8-bit PNG; gray input is expanded so the result is 1 or 3 channels.
  inline Image read_png(const std::string& path) {
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&png, path.c_str())) {
      throw std::runtime_error("read_png: " + path + ": " + png.message);
    }
    png.format = (png.format & PNG_FORMAT_FLAG_COLOR) ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

    Image image;
    image.width = std::int32_t(png.width);
    image.height = std::int32_t(png.height);
    image.channels = (png.format == PNG_FORMAT_RGB) ? 3 : 1;
    image.pixels.resize(PNG_IMAGE_SIZE(png));
    if (!png_image_finish_read(&png, nullptr, image.pixels.data(), 0, nullptr)) {
      const std::string message = png.message;
      png_image_free(&png);
      throw std::runtime_error("read_png: " + path + ": " + message);
    }
    return image;
  }

  inline void write_png(const Image& image, const std::string& path) {
    if (image.channels != 1 && image.channels != 3) {
      throw std::invalid_argument("write_png: only 1 or 3 channel images supported");
    }
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    png.width = png_uint_32(image.width);
    png.height = png_uint_32(image.height);
    png.format = image.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&png, path.c_str(), 0, image.pixels.data(), 0, nullptr)) {
      throw std::runtime_error("write_png: " + path + ": " + png.message);
    }
  }

  /// Dispatch on file extension: .png or .ppm.
  inline Image read_image(const std::string& path) {
    if (detail::has_extension(path, ".png")) {
      return read_png(path);
    }
    if (detail::has_extension(path, ".ppm")) {
      return read_ppm(path);
    }
    throw std::runtime_error("read_image: unsupported extension on " + path);
  }

  inline void write_image(const Image& image, const std::string& path) {
    if (detail::has_extension(path, ".png")) {
      write_png(image, path);
      return;
    }
    if (detail::has_extension(path, ".ppm")) {
      write_ppm(image, path);
      return;
    }
    throw std::runtime_error("write_image: unsupported extension on " + path);
  }

}  // namespace io
}  // namespace visualmesh

#endif  // VISUALMESH_IO_IMAGE_IO_HPP
