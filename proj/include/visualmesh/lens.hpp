#ifndef VISUALMESH_LENS_HPP
#define VISUALMESH_LENS_HPP

#include <array>
#include <cstdint>
#include <stdexcept>

#include "util/math.hpp"

namespace visualmesh {

/// Supported lens projection models.
enum class LensProjection : std::uint8_t {
  /// Pinhole mapping ρ = f·tan(θ)
  RECTILINEAR,
  /// Fisheye mapping ρ = 2f·sin(θ/2)
  EQUISOLID
};

/**
 * @brief Intrinsic description of the camera lens and sensor.
 */
struct LensModel {
  LensProjection projection = LensProjection::RECTILINEAR;
  /// Focal length in pixels
  double focal_length = 0.0;
  /// Principal point in pixel coordinates
  vec2<double> center{{0.0, 0.0}};
  /// Sensor size in pixels, {width, height}
  std::array<std::int32_t, 2> resolution{{0, 0}};
  /// Maximum accepted angle from the optical axis in radians, in (0, π]
  double fov = 0.0;

  bool operator==(const LensModel&) const = default;
};

inline void validate_lens(const LensModel& lens) {
  constexpr double pi = 3.141592653589793238462643383279502884;
  if (!(lens.focal_length > 0.0)) {
    throw std::invalid_argument("lens: focal length must be positive");
  }
  if (!(lens.fov > 0.0) || lens.fov > pi) {
    throw std::invalid_argument("lens: fov must be in (0, pi]");
  }
  if (lens.resolution[0] <= 0 || lens.resolution[1] <= 0) {
    throw std::invalid_argument("lens: resolution must be positive");
  }
}

}  // namespace visualmesh

#endif  // VISUALMESH_LENS_HPP
