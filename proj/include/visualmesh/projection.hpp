#ifndef VISUALMESH_PROJECTION_HPP
#define VISUALMESH_PROJECTION_HPP

#include <cmath>
#include <optional>

#include "camera.hpp"
#include "lens.hpp"
#include "util/math.hpp"

namespace visualmesh {

/**
 * @brief Project a world direction through the camera onto the image.
 *
 * @param direction unit direction in the observation-plane frame
 * @param pose      camera extrinsics
 * @param lens      camera intrinsics
 *
 * @return the pixel coordinate, or nullopt when the direction is outside the field of view,
 *         behind the camera, or lands outside the sensor
 */
inline std::optional<vec2<double>> project_node(const vec3<double>& direction,
                                                const CameraPose& pose,
                                                const LensModel& lens) {
  constexpr double half_pi = 1.5707963267948966;

  const vec3<double> cam = multiply(pose.orientation, direction);
  double cos_theta = cam[2];
  cos_theta = cos_theta > 1.0 ? 1.0 : (cos_theta < -1.0 ? -1.0 : cos_theta);
  const double theta = std::acos(cos_theta);

  if (theta > lens.fov) {
    return std::nullopt;
  }
  // a rectilinear sensor cannot image at or beyond 90 degrees regardless of the configured fov
  if (lens.projection == LensProjection::RECTILINEAR && theta >= half_pi) {
    return std::nullopt;
  }

  const double rho = lens.projection == LensProjection::RECTILINEAR
                       ? lens.focal_length * std::tan(theta)
                       : 2.0 * lens.focal_length * std::sin(theta * 0.5);

  const double r_xy = std::hypot(cam[0], cam[1]);
  vec2<double> pixel = lens.center;
  if (r_xy > 0.0) {
    pixel[0] += rho * cam[0] / r_xy;
    pixel[1] += rho * cam[1] / r_xy;
  }

  if (pixel[0] < 0.0 || pixel[0] >= double(lens.resolution[0]) || pixel[1] < 0.0
      || pixel[1] >= double(lens.resolution[1])) {
    return std::nullopt;
  }
  return pixel;
}

}  // namespace visualmesh

#endif  // VISUALMESH_PROJECTION_HPP
