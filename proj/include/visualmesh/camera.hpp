#ifndef VISUALMESH_CAMERA_HPP
#define VISUALMESH_CAMERA_HPP

#include <cmath>
#include <stdexcept>

#include "util/math.hpp"

namespace visualmesh {

/**
 * @brief Extrinsic camera state relative to the observation plane.
 *
 * The observation-plane frame has its origin at the camera with +z pointing straight down at the
 * plane; +x is the reference ground heading. The camera frame is the usual computer-vision one:
 * +z along the optical axis, +x image-right, +y image-down. `orientation` maps plane-frame
 * directions into the camera frame, so the identity matrix is a camera looking straight down.
 */
struct CameraPose {
  /// Camera height above the observation plane in metres
  double height = 0.0;
  /// Rotation taking observation-plane directions to camera directions
  mat3<double> orientation = identity_mat3<double>();

  bool operator==(const CameraPose&) const = default;
};

/// Orthonormality + right-handedness check used to validate poses.
inline bool is_rotation(const mat3<double>& m, double tolerance = 1e-9) {
  const mat3<double> mt = transpose(m);
  const mat3<double> should_be_identity = multiply(m, mt);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      const double expected = r == c ? 1.0 : 0.0;
      if (std::abs(should_be_identity[r][c] - expected) > tolerance) {
        return false;
      }
    }
  }
  const double det = dot(m[0], cross(m[1], m[2]));
  return std::abs(det - 1.0) <= tolerance;
}

inline void validate_pose(const CameraPose& pose) {
  if (!(pose.height > 0.0)) {
    throw std::invalid_argument("pose: camera height must be positive");
  }
  if (!is_rotation(pose.orientation)) {
    throw std::invalid_argument("pose: orientation must be a proper rotation");
  }
}

/**
 * @brief Build a camera orientation from euler angles.
 *
 * All angles in radians. pitch = 0 looks straight down; positive pitch tilts the view up toward
 * the plane -y direction with the horizon staying level in the image (π/2 looks at the horizon).
 * Positive yaw then turns the viewing heading about the vertical, from -y toward +x. Roll spins
 * the image about the optical axis.
 */
inline mat3<double> orientation_from_euler(double roll, double pitch, double yaw) {
  const double cr = std::cos(roll), sr = std::sin(roll);
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  const double cy = std::cos(yaw), sy = std::sin(yaw);

  // Rz(roll) · Rx(-pitch) · Rz(-yaw), mapping plane directions to camera directions
  const mat3<double> rz_roll = {{{{cr, -sr, 0}}, {{sr, cr, 0}}, {{0, 0, 1}}}};
  const mat3<double> rx_pitch = {{{{1, 0, 0}}, {{0, cp, sp}}, {{0, -sp, cp}}}};
  const mat3<double> rz_yaw = {{{{cy, sy, 0}}, {{-sy, cy, 0}}, {{0, 0, 1}}}};
  return multiply(rz_roll, multiply(rx_pitch, rz_yaw));
}

}  // namespace visualmesh

#endif  // VISUALMESH_CAMERA_HPP
