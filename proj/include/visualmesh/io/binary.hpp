#ifndef VISUALMESH_IO_BINARY_HPP
#define VISUALMESH_IO_BINARY_HPP

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace visualmesh {
namespace io {
  namespace detail {

    // Explicit little-endian field encoding so the files are identical across hosts.

    template <typename T>
    inline void write_le(std::ostream& out, T value) {
      static_assert(std::is_unsigned_v<T>);
      char bytes[sizeof(T)];
      for (std::size_t i = 0; i < sizeof(T); ++i) {
        bytes[i] = char((value >> (8 * i)) & 0xFF);
      }
      out.write(bytes, sizeof(T));
    }

    inline void write_f32(std::ostream& out, float value) {
      write_le(out, std::bit_cast<std::uint32_t>(value));
    }
    inline void write_f64(std::ostream& out, double value) {
      write_le(out, std::bit_cast<std::uint64_t>(value));
    }

    template <typename T>
    inline T read_le(std::istream& in, const char* context) {
      static_assert(std::is_unsigned_v<T>);
      char bytes[sizeof(T)];
      if (!in.read(bytes, sizeof(T))) {
        throw std::runtime_error(std::string(context) + ": truncated file");
      }
      T value = 0;
      for (std::size_t i = 0; i < sizeof(T); ++i) {
        value |= T(std::uint8_t(bytes[i])) << (8 * i);
      }
      return value;
    }

    inline float read_f32(std::istream& in, const char* context) {
      return std::bit_cast<float>(read_le<std::uint32_t>(in, context));
    }
    inline double read_f64(std::istream& in, const char* context) {
      return std::bit_cast<double>(read_le<std::uint64_t>(in, context));
    }

    inline void write_magic(std::ostream& out, const char (&magic)[5]) {
      out.write(magic, 4);
    }

    inline void check_magic(std::istream& in, const char (&magic)[5], const char* context) {
      char found[4];
      if (!in.read(found, 4)) {
        throw std::runtime_error(std::string(context) + ": truncated file");
      }
      if (found[0] != magic[0] || found[1] != magic[1] || found[2] != magic[2] || found[3] != magic[3]) {
        throw std::runtime_error(std::string(context) + ": bad magic, not a " + magic + " file");
      }
    }

  }  // namespace detail
}  // namespace io
}  // namespace visualmesh

#endif  // VISUALMESH_IO_BINARY_HPP
