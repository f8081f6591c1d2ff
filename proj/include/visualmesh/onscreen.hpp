#ifndef VISUALMESH_ONSCREEN_HPP
#define VISUALMESH_ONSCREEN_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "mesh.hpp"
#include "projection.hpp"

namespace visualmesh {

/**
 * @brief The visible subset of a VisualMesh for one camera pose and lens.
 *
 * Visible nodes keep their relative order from the mesh. Neighbour indices are remapped into the
 * visible set; any neighbour that is off screen maps to the sentinel index, which is one past the
 * last visible node. The engine gives the sentinel an all-zero feature row.
 */
struct OnScreenMesh {
  /// Image coordinates of each visible node
  std::vector<vec2<double>> pixel_coords;
  /// Remapped neighbour indices, sentinel() for off-screen neighbours
  std::vector<std::array<std::uint64_t, 6>> neighbors;
  /// Visible-node index back to the originating VisualMesh node index
  std::vector<std::uint64_t> origin_indices;

  std::uint64_t size() const {
    return pixel_coords.size();
  }
  /// The reserved index standing in for every off-screen neighbour
  std::uint64_t sentinel() const {
    return pixel_coords.size();
  }

  bool operator==(const OnScreenMesh&) const = default;
};

/**
 * @brief Project every mesh node and keep the ones that land on the sensor.
 *
 * Deterministic: visible nodes appear in ascending mesh index order and the result depends only
 * on the inputs.
 */
inline OnScreenMesh lookup_onscreen(const VisualMesh& mesh, const CameraPose& pose, const LensModel& lens) {
  validate_pose(pose);
  validate_lens(lens);

  OnScreenMesh onscreen;
  const std::uint64_t invisible = ~std::uint64_t(0);
  std::vector<std::uint64_t> remap(mesh.nodes.size(), invisible);

  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
    if (auto pixel = project_node(mesh.nodes[i].direction, pose, lens)) {
      remap[i] = onscreen.pixel_coords.size();
      onscreen.pixel_coords.push_back(*pixel);
      onscreen.origin_indices.push_back(i);
    }
  }

  const std::uint64_t sentinel = onscreen.sentinel();
  onscreen.neighbors.resize(onscreen.pixel_coords.size());
  for (std::size_t v = 0; v < onscreen.origin_indices.size(); ++v) {
    const MeshNode& node = mesh.nodes[onscreen.origin_indices[v]];
    for (int j = 0; j < 6; ++j) {
      const std::uint64_t mapped = remap[node.neighbors[j]];
      onscreen.neighbors[v][j] = mapped == invisible ? sentinel : mapped;
    }
  }
  return onscreen;
}

}  // namespace visualmesh

#endif  // VISUALMESH_ONSCREEN_HPP
