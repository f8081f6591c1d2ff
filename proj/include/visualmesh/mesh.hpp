#ifndef VISUALMESH_MESH_HPP
#define VISUALMESH_MESH_HPP

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "geometry.hpp"
#include "node.hpp"

namespace visualmesh {

/**
 * @brief The complete sample mesh for one geometry configuration.
 *
 * Nodes are stored ring-major with ring_offsets[n] giving the index of the first node of ring n.
 * The structure is immutable once built and safe to share between threads.
 */
struct VisualMesh {
  std::vector<MeshNode> nodes;
  std::vector<std::uint64_t> ring_offsets;
  MeshGeometryConfig config{};

  bool operator==(const VisualMesh&) const = default;
};

namespace detail {

  // ceil with a guard against arguments that are an ulp above an exact integer, so ring counts
  // like 2pi / (pi/3) = 6 do not round up to 7
  inline std::uint64_t ring_node_count(double dtheta) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    const double exact = two_pi / dtheta;
    const auto count = std::uint64_t(std::ceil(exact * (1.0 - 1e-12)));
    return count > 1 ? count : 1;
  }

  // The two nearest nodes (by wrapped theta distance, ties toward smaller theta) on a ring with
  // `count` equally spaced nodes, for a query azimuth.
  inline std::pair<std::uint64_t, std::uint64_t> nearest_two(double theta, std::uint64_t count) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    if (count == 1) {
      return {0, 0};
    }
    const double step = two_pi / double(count);
    const auto base = std::int64_t(std::floor(theta / step));

    std::uint64_t best[2] = {0, 0};
    double best_dist[2] = {two_pi, two_pi};
    double best_theta[2] = {two_pi, two_pi};
    for (std::int64_t offset = -1; offset <= 2; ++offset) {
      const auto j = std::uint64_t(((base + offset) % std::int64_t(count) + std::int64_t(count)) % std::int64_t(count));
      if (j == best[0] && best_dist[0] < two_pi) {
        continue;  // wrapped onto an already considered index (count 2 or 3)
      }
      const double node_theta = double(j) * step;
      double dist = std::abs(node_theta - theta);
      if (dist > two_pi - dist) {
        dist = two_pi - dist;
      }
      const bool better_than_0 = dist < best_dist[0] || (dist == best_dist[0] && node_theta < best_theta[0]);
      const bool better_than_1 = dist < best_dist[1] || (dist == best_dist[1] && node_theta < best_theta[1]);
      if (better_than_0) {
        best[1] = best[0];
        best_dist[1] = best_dist[0];
        best_theta[1] = best_theta[0];
        best[0] = j;
        best_dist[0] = dist;
        best_theta[0] = node_theta;
      }
      else if (better_than_1 && j != best[0]) {
        best[1] = j;
        best_dist[1] = dist;
        best_theta[1] = node_theta;
      }
    }
    return {best[0], best[1]};
  }

}  // namespace detail

/**
 * @brief Materialise a φ series into the linked node graph.
 *
 * Ring 0 is the single node straight down, linked to six equally spaced nodes of ring 1. Ring n
 * has ceil(2π/Δθ_n) nodes equally spaced in theta starting at theta = 0, each linked to its two
 * ring neighbours and the two nearest nodes on each adjacent ring.
 */
inline VisualMesh build_mesh(const PhiSeries& series, const MeshGeometryConfig& config) {
  constexpr double two_pi = 6.283185307179586476925286766559;

  VisualMesh mesh;
  mesh.config = config;

  const std::size_t ring_count = series.angles.size();
  std::vector<std::uint64_t> counts(ring_count);
  mesh.ring_offsets.resize(ring_count);
  std::uint64_t total = 0;
  for (std::size_t n = 0; n < ring_count; ++n) {
    counts[n] = n == 0 ? 1 : detail::ring_node_count(delta_theta(series.angles[n], config.height, series.effective_radius));
    mesh.ring_offsets[n] = total;
    total += counts[n];
  }

  mesh.nodes.resize(total);

  // Place nodes ring-major with theta = 0 aligned to the plane +x axis on every ring
  for (std::size_t n = 0; n < ring_count; ++n) {
    const double phi = series.angles[n];
    const double sin_phi = std::sin(phi);
    const double cos_phi = std::cos(phi);
    const double step = two_pi / double(counts[n]);
    for (std::uint64_t i = 0; i < counts[n]; ++i) {
      MeshNode& node = mesh.nodes[mesh.ring_offsets[n] + i];
      node.ring = std::uint32_t(n);
      node.theta = double(i) * step;
      node.direction = {{sin_phi * std::cos(node.theta), sin_phi * std::sin(node.theta), cos_phi}};
    }
  }

  // Link the graph
  for (std::size_t n = 0; n < ring_count; ++n) {
    const std::uint64_t offset = mesh.ring_offsets[n];
    const std::uint64_t count = counts[n];

    if (n == 0) {
      MeshNode& center = mesh.nodes[0];
      if (ring_count == 1) {
        center.neighbors.fill(0);  // degenerate single-node mesh self-references
      }
      else {
        // six equally spaced picks around ring 1
        const std::uint64_t count_1 = counts[1];
        for (std::uint64_t j = 0; j < 6; ++j) {
          center.neighbors[j] = mesh.ring_offsets[1] + (j * count_1) / 6 % count_1;
        }
      }
      continue;
    }

    for (std::uint64_t i = 0; i < count; ++i) {
      MeshNode& node = mesh.nodes[offset + i];
      node.neighbors[slot::LEFT] = offset + (i + count - 1) % count;
      node.neighbors[slot::RIGHT] = offset + (i + 1) % count;

      if (n == 1) {
        // both below-slots reference the centre node
        node.neighbors[slot::BELOW_0] = 0;
        node.neighbors[slot::BELOW_1] = 0;
      }
      else {
        const auto [b0, b1] = detail::nearest_two(node.theta, counts[n - 1]);
        node.neighbors[slot::BELOW_0] = mesh.ring_offsets[n - 1] + b0;
        node.neighbors[slot::BELOW_1] = mesh.ring_offsets[n - 1] + b1;
      }

      if (n + 1 < ring_count) {
        const auto [a0, a1] = detail::nearest_two(node.theta, counts[n + 1]);
        node.neighbors[slot::ABOVE_0] = mesh.ring_offsets[n + 1] + a0;
        node.neighbors[slot::ABOVE_1] = mesh.ring_offsets[n + 1] + a1;
      }
      else {
        // last ring: above-slots self-reference
        node.neighbors[slot::ABOVE_0] = offset + i;
        node.neighbors[slot::ABOVE_1] = offset + i;
      }
    }
  }

  return mesh;
}

/// Convenience overload generating the series internally.
inline VisualMesh build_mesh(const MeshGeometryConfig& config) {
  return build_mesh(build_phi_series(config), config);
}

}  // namespace visualmesh

#endif  // VISUALMESH_MESH_HPP
