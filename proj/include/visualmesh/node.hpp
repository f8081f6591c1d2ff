#ifndef VISUALMESH_NODE_HPP
#define VISUALMESH_NODE_HPP

#include <array>
#include <cstdint>

#include "util/math.hpp"

namespace visualmesh {

/// Neighbour slot layout, frozen by the mesh and network file formats.
namespace slot {
  inline constexpr int LEFT = 0;        ///< previous node on the same ring
  inline constexpr int RIGHT = 1;       ///< next node on the same ring
  inline constexpr int BELOW_0 = 2;     ///< nearest node on the ring below
  inline constexpr int BELOW_1 = 3;     ///< second nearest node on the ring below
  inline constexpr int ABOVE_0 = 4;     ///< nearest node on the ring above
  inline constexpr int ABOVE_1 = 5;     ///< second nearest node on the ring above
}  // namespace slot

/**
 * @brief A single sample point of the visual mesh.
 *
 * Directions are unit vectors in the observation-plane frame (+z pointing down at the plane from
 * the camera). Every node has exactly six neighbour slots; boundary rings fill the missing slots
 * by the documented clamping rules (ring 1 points both below-slots at the centre node, the last
 * ring's above-slots self-reference).
 */
struct MeshNode {
  /// Ring index n (0 is the single node below the camera)
  std::uint32_t ring = 0;
  /// Azimuth about the point below the camera, in [0, 2π)
  double theta = 0.0;
  /// Unit view direction in the observation-plane frame
  vec3<double> direction{{0.0, 0.0, 1.0}};
  /// Indices of the six linked nodes, ordered [left, right, below x2, above x2]
  std::array<std::uint64_t, 6> neighbors{};

  bool operator==(const MeshNode&) const = default;
};

}  // namespace visualmesh

#endif  // VISUALMESH_NODE_HPP
