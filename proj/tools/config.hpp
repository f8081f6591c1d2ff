#ifndef VISUALMESH_TOOLS_CONFIG_HPP
#define VISUALMESH_TOOLS_CONFIG_HPP

#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include <visualmesh/camera.hpp>
#include <visualmesh/geometry.hpp>
#include <visualmesh/io/mesh_io.hpp>
#include <visualmesh/lens.hpp>

namespace vmcli {

/// Bad or inconsistent configuration; the CLI exits with status 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/**
 * @brief Everything a CLI run needs: mesh geometry, lens, camera pose and file paths.
 *
 * One JSON document holds the whole configuration; every command-line flag mirrors a JSON path
 * (e.g. --lens.fov overrides lens.fov) and wins over the file.
 */
struct RunConfig {
  visualmesh::MeshGeometryConfig geometry{
    1.1, {visualmesh::ShapeKind::SPHERE, 0.095}, 4, 1, 10.0};
  visualmesh::LensModel lens{
    visualmesh::LensProjection::EQUISOLID, 330.0, {{512.0, 512.0}}, {{1024, 1024}}, 3.141592653589793};
  struct Pose {
    double roll = 0.0;
    double pitch = 0.0;
    double yaw = 0.0;
    /// Camera height; defaults to the geometry height when not given
    std::optional<double> height;

    bool operator==(const Pose&) const = default;
  } pose;
  struct Paths {
    std::string mesh_cache;
    std::string network;
    std::string image;
    std::string output;

    bool operator==(const Paths&) const = default;
  } paths;

  bool operator==(const RunConfig&) const = default;

  visualmesh::CameraPose camera_pose() const {
    return {pose.height.value_or(geometry.height),
            visualmesh::orientation_from_euler(pose.roll, pose.pitch, pose.yaw)};
  }
};

inline nlohmann::json to_json(const RunConfig& config) {
  nlohmann::json j;
  j["geometry"] = visualmesh::io::geometry_config_to_json(config.geometry);
  j["lens"] = {
    {"projection", config.lens.projection == visualmesh::LensProjection::RECTILINEAR ? "rectilinear" : "equisolid"},
    {"focal_length", config.lens.focal_length},
    {"center", config.lens.center},
    {"resolution", config.lens.resolution},
    {"fov", config.lens.fov},
  };
  j["pose"] = {
    {"roll", config.pose.roll},
    {"pitch", config.pose.pitch},
    {"yaw", config.pose.yaw},
    {"height", config.pose.height.value_or(config.geometry.height)},
  };
  j["paths"] = {
    {"mesh_cache", config.paths.mesh_cache},
    {"network", config.paths.network},
    {"image", config.paths.image},
    {"output", config.paths.output},
  };
  return j;
}

inline RunConfig parse_config(const nlohmann::json& j) {
  RunConfig config;
  try {
    if (j.contains("geometry")) {
      config.geometry = visualmesh::io::geometry_config_from_json(j.at("geometry"));
    }
    if (j.contains("lens")) {
      const nlohmann::json& lens = j.at("lens");
      const std::string projection = lens.at("projection").get<std::string>();
      if (projection != "rectilinear" && projection != "equisolid") {
        throw ConfigError("lens.projection must be \"rectilinear\" or \"equisolid\", got \"" + projection + "\"");
      }
      config.lens.projection = projection == "rectilinear" ? visualmesh::LensProjection::RECTILINEAR
                                                           : visualmesh::LensProjection::EQUISOLID;
      config.lens.focal_length = lens.at("focal_length").get<double>();
      config.lens.center = lens.at("center").get<visualmesh::vec2<double>>();
      config.lens.resolution = lens.at("resolution").get<std::array<std::int32_t, 2>>();
      config.lens.fov = lens.at("fov").get<double>();
    }
    if (j.contains("pose")) {
      const nlohmann::json& pose = j.at("pose");
      config.pose.roll = pose.value("roll", 0.0);
      config.pose.pitch = pose.value("pitch", 0.0);
      config.pose.yaw = pose.value("yaw", 0.0);
      if (pose.contains("height")) {
        config.pose.height = pose.at("height").get<double>();
      }
    }
    if (j.contains("paths")) {
      const nlohmann::json& paths = j.at("paths");
      config.paths.mesh_cache = paths.value("mesh_cache", "");
      config.paths.network = paths.value("network", "");
      config.paths.image = paths.value("image", "");
      config.paths.output = paths.value("output", "");
    }
  }
  catch (const ConfigError&) {
    throw;
  }
  catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return config;
}

inline RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot open " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  }
  catch (const std::exception& e) {
    throw ConfigError("config: " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

}  // namespace vmcli

#endif  // VISUALMESH_TOOLS_CONFIG_HPP
