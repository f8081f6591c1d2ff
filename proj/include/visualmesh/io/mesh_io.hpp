#ifndef VISUALMESH_IO_MESH_IO_HPP
#define VISUALMESH_IO_MESH_IO_HPP

#include <fstream>
#include <string>

#include <json.hpp>

#include "../mesh.hpp"
#include "binary.hpp"

namespace visualmesh {
namespace io {

  inline constexpr std::uint32_t MESH_FORMAT_VERSION = 1;

  /**
   * @brief Write a mesh in the versioned little-endian binary format.
   *
   * Layout: magic "VMSH", version u32, node count u64, ring count u64, ring offsets u64 each,
   * then per node {ring u32, theta f64, direction f64 x3, neighbors u64 x6}. The geometry
   * configuration is not part of the format; callers that need it keep it beside the file.
   */
  inline void save_mesh(const VisualMesh& mesh, std::ostream& out) {
    detail::write_magic(out, "VMSH");
    detail::write_le<std::uint32_t>(out, MESH_FORMAT_VERSION);
    detail::write_le<std::uint64_t>(out, mesh.nodes.size());
    detail::write_le<std::uint64_t>(out, mesh.ring_offsets.size());
    for (std::uint64_t offset : mesh.ring_offsets) {
      detail::write_le<std::uint64_t>(out, offset);
    }
    for (const MeshNode& node : mesh.nodes) {
      detail::write_le<std::uint32_t>(out, node.ring);
      detail::write_f64(out, node.theta);
      detail::write_f64(out, node.direction[0]);
      detail::write_f64(out, node.direction[1]);
      detail::write_f64(out, node.direction[2]);
      for (std::uint64_t neighbor : node.neighbors) {
        detail::write_le<std::uint64_t>(out, neighbor);
      }
    }
    if (!out) {
      throw std::runtime_error("save_mesh: write failed");
    }
  }

  inline void save_mesh(const VisualMesh& mesh, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw std::runtime_error("save_mesh: cannot open " + path);
    }
    save_mesh(mesh, out);
  }

  /**
   * @brief Read a mesh back. The returned config is default-initialised; the binary format does
   *        not carry it.
   */
  inline VisualMesh load_mesh(std::istream& in) {
    detail::check_magic(in, "VMSH", "load_mesh");
    const auto version = detail::read_le<std::uint32_t>(in, "load_mesh");
    if (version != MESH_FORMAT_VERSION) {
      throw std::runtime_error("load_mesh: unsupported version " + std::to_string(version));
    }
    const auto node_count = detail::read_le<std::uint64_t>(in, "load_mesh");
    const auto ring_count = detail::read_le<std::uint64_t>(in, "load_mesh");

    VisualMesh mesh;
    mesh.ring_offsets.resize(ring_count);
    for (std::uint64_t& offset : mesh.ring_offsets) {
      offset = detail::read_le<std::uint64_t>(in, "load_mesh");
      if (offset >= node_count && node_count > 0) {
        throw std::runtime_error("load_mesh: ring offset out of range");
      }
    }
    mesh.nodes.resize(node_count);
    for (MeshNode& node : mesh.nodes) {
      node.ring = detail::read_le<std::uint32_t>(in, "load_mesh");
      node.theta = detail::read_f64(in, "load_mesh");
      node.direction[0] = detail::read_f64(in, "load_mesh");
      node.direction[1] = detail::read_f64(in, "load_mesh");
      node.direction[2] = detail::read_f64(in, "load_mesh");
      for (std::uint64_t& neighbor : node.neighbors) {
        neighbor = detail::read_le<std::uint64_t>(in, "load_mesh");
        if (neighbor >= node_count) {
          throw std::runtime_error("load_mesh: neighbor index out of range");
        }
      }
    }
    return mesh;
  }

  inline VisualMesh load_mesh(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw std::runtime_error("load_mesh: cannot open " + path);
    }
    return load_mesh(in);
  }

  inline nlohmann::json geometry_config_to_json(const MeshGeometryConfig& config) {
    return nlohmann::json{
      {"height", config.height},
      {"shape",
       {{"kind", config.shape.kind == ShapeKind::CIRCLE ? "circle" : "sphere"}, {"radius", config.shape.radius}}},
      {"density", {{"p", config.density_p}, {"q", config.density_q}}},
      {"max_ground_distance", config.max_ground_distance},
    };
  }

  inline MeshGeometryConfig geometry_config_from_json(const nlohmann::json& j) {
    MeshGeometryConfig config;
    config.height = j.at("height").get<double>();
    const std::string kind = j.at("shape").at("kind").get<std::string>();
    if (kind != "circle" && kind != "sphere") {
      throw std::runtime_error("geometry config: shape kind must be \"circle\" or \"sphere\", got \"" + kind + "\"");
    }
    config.shape.kind = kind == "circle" ? ShapeKind::CIRCLE : ShapeKind::SPHERE;
    config.shape.radius = j.at("shape").at("radius").get<double>();
    config.density_p = j.at("density").at("p").get<std::uint32_t>();
    config.density_q = j.at("density").at("q").get<std::uint32_t>();
    config.max_ground_distance = j.at("max_ground_distance").get<double>();
    return config;
  }

  /**
   * @brief Debugging JSON export with the same field names as the binary format, plus the
   *        generating configuration.
   */
  inline nlohmann::json mesh_to_json(const VisualMesh& mesh) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const MeshNode& node : mesh.nodes) {
      nodes.push_back({
        {"ring", node.ring},
        {"theta", node.theta},
        {"direction", node.direction},
        {"neighbors", node.neighbors},
      });
    }
    return nlohmann::json{
      {"config", geometry_config_to_json(mesh.config)},
      {"ring_offsets", mesh.ring_offsets},
      {"nodes", std::move(nodes)},
    };
  }

  inline void save_mesh_json(const VisualMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
      throw std::runtime_error("save_mesh_json: cannot open " + path);
    }
    out << mesh_to_json(mesh).dump(1, '\t') << "\n";
  }

}  // namespace io
}  // namespace visualmesh

#endif  // VISUALMESH_IO_MESH_IO_HPP
