#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <visualmesh/io/image_io.hpp>
#include <visualmesh/io/mesh_io.hpp>
#include <visualmesh/io/network_io.hpp>
#include <visualmesh/visualmesh.hpp>

#include "config.hpp"
#include "overlay.hpp"

namespace {

using namespace visualmesh;
using vmcli::ConfigError;
using vmcli::RunConfig;

// ---------------------------------------------------------------------------
// configuration plumbing

struct ConfigCli {
  std::string config_path;

  std::optional<double> geometry_height;
  std::optional<std::string> shape_kind;
  std::optional<double> shape_radius;
  std::optional<std::uint32_t> density_p;
  std::optional<std::uint32_t> density_q;
  std::optional<double> max_ground_distance;

  std::optional<std::string> lens_projection;
  std::optional<double> focal_length;
  std::optional<std::vector<double>> lens_center;
  std::optional<std::vector<std::int32_t>> lens_resolution;
  std::optional<double> fov;

  std::optional<double> roll;
  std::optional<double> pitch;
  std::optional<double> yaw;
  std::optional<double> pose_height;

  std::optional<std::string> mesh_cache;
  std::optional<std::string> network;
  std::optional<std::string> image;
  std::optional<std::string> output;
};

void add_config_options(CLI::App* command, ConfigCli& cli) {
  command->add_option("-c,--config", cli.config_path, "JSON configuration file; flags override its fields");

  command->add_option("--geometry.height", cli.geometry_height, "camera height above the plane in metres");
  command->add_option("--geometry.shape.kind", cli.shape_kind, "target shape: circle or sphere");
  command->add_option("--geometry.shape.radius", cli.shape_radius, "target radius in metres");
  command->add_option("--geometry.density.p", cli.density_p, "sample density numerator");
  command->add_option("--geometry.density.q", cli.density_q, "sample density denominator");
  command->add_option("--geometry.max_ground_distance", cli.max_ground_distance, "mesh coverage bound in metres");

  command->add_option("--lens.projection", cli.lens_projection, "lens model: rectilinear or equisolid");
  command->add_option("--lens.focal_length", cli.focal_length, "focal length in pixels");
  command->add_option("--lens.center", cli.lens_center, "principal point, two values")->expected(2);
  command->add_option("--lens.resolution", cli.lens_resolution, "sensor size, two values")->expected(2);
  command->add_option("--lens.fov", cli.fov, "maximum accepted angle from the optical axis in radians");

  command->add_option("--pose.roll", cli.roll, "camera roll in radians");
  command->add_option("--pose.pitch", cli.pitch, "camera pitch in radians, 0 looks straight down");
  command->add_option("--pose.yaw", cli.yaw, "camera yaw in radians");
  command->add_option("--pose.height", cli.pose_height, "camera height in metres, defaults to geometry.height");

  command->add_option("--paths.mesh_cache", cli.mesh_cache, "binary mesh cache file");
  command->add_option("--paths.network", cli.network, "network weights file");
  command->add_option("--paths.image", cli.image, "input image (png or ppm)");
  command->add_option("--paths.output", cli.output, "output file");
}

RunConfig resolve_config(const ConfigCli& cli) {
  RunConfig config = cli.config_path.empty() ? RunConfig{} : vmcli::load_config_file(cli.config_path);

  if (cli.geometry_height) config.geometry.height = *cli.geometry_height;
  if (cli.shape_kind) {
    if (*cli.shape_kind != "circle" && *cli.shape_kind != "sphere") {
      throw ConfigError("geometry.shape.kind must be \"circle\" or \"sphere\", got \"" + *cli.shape_kind + "\"");
    }
    config.geometry.shape.kind = *cli.shape_kind == "circle" ? ShapeKind::CIRCLE : ShapeKind::SPHERE;
  }
  if (cli.shape_radius) config.geometry.shape.radius = *cli.shape_radius;
  if (cli.density_p) config.geometry.density_p = *cli.density_p;
  if (cli.density_q) config.geometry.density_q = *cli.density_q;
  if (cli.max_ground_distance) config.geometry.max_ground_distance = *cli.max_ground_distance;

  if (cli.lens_projection) {
    if (*cli.lens_projection != "rectilinear" && *cli.lens_projection != "equisolid") {
      throw ConfigError("lens.projection must be \"rectilinear\" or \"equisolid\", got \"" + *cli.lens_projection
                        + "\"");
    }
    config.lens.projection =
      *cli.lens_projection == "rectilinear" ? LensProjection::RECTILINEAR : LensProjection::EQUISOLID;
  }
  if (cli.focal_length) config.lens.focal_length = *cli.focal_length;
  if (cli.lens_center) config.lens.center = {{(*cli.lens_center)[0], (*cli.lens_center)[1]}};
  if (cli.lens_resolution) config.lens.resolution = {{(*cli.lens_resolution)[0], (*cli.lens_resolution)[1]}};
  if (cli.fov) config.lens.fov = *cli.fov;

  if (cli.roll) config.pose.roll = *cli.roll;
  if (cli.pitch) config.pose.pitch = *cli.pitch;
  if (cli.yaw) config.pose.yaw = *cli.yaw;
  if (cli.pose_height) config.pose.height = *cli.pose_height;

  if (cli.mesh_cache) config.paths.mesh_cache = *cli.mesh_cache;
  if (cli.network) config.paths.network = *cli.network;
  if (cli.image) config.paths.image = *cli.image;
  if (cli.output) config.paths.output = *cli.output;

  try {
    validate_lens(config.lens);
  }
  catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return config;
}

// ---------------------------------------------------------------------------
// mesh cache

struct MeshResult {
  VisualMesh mesh;
  bool cache_hit = false;
};

std::string sidecar_path(const std::string& mesh_path) {
  return mesh_path + ".meta.json";
}

// A cached mesh is reusable when the geometry matches exactly, except that the height may drift
// within 2% before a rebuild is forced.
bool cache_compatible(const MeshGeometryConfig& cached, const MeshGeometryConfig& wanted) {
  return cached.shape == wanted.shape && cached.density_p == wanted.density_p
         && cached.density_q == wanted.density_q && cached.max_ground_distance == wanted.max_ground_distance
         && std::abs(cached.height - wanted.height) <= 0.02 * wanted.height;
}

MeshResult load_or_build_mesh(const RunConfig& config) {
  const std::string& path = config.paths.mesh_cache;
  if (!path.empty() && std::filesystem::exists(path) && std::filesystem::exists(sidecar_path(path))) {
    std::ifstream meta(sidecar_path(path));
    nlohmann::json j;
    meta >> j;
    const MeshGeometryConfig cached = io::geometry_config_from_json(j);
    if (cache_compatible(cached, config.geometry)) {
      VisualMesh mesh = io::load_mesh(path);
      mesh.config = cached;
      return {std::move(mesh), true};
    }
  }

  MeshResult result{build_mesh(config.geometry), false};
  if (!path.empty()) {
    io::save_mesh(result.mesh, path);
    std::ofstream meta(sidecar_path(path));
    meta << io::geometry_config_to_json(config.geometry).dump(1, '\t') << "\n";
  }
  return result;
}

// ---------------------------------------------------------------------------
// shared helpers

Image load_input_image(const RunConfig& config) {
  if (config.paths.image.empty()) {
    throw ConfigError("paths.image is required for this command");
  }
  Image image = io::read_image(config.paths.image);
  if (image.width != config.lens.resolution[0] || image.height != config.lens.resolution[1]) {
    throw std::runtime_error("image resolution " + std::to_string(image.width) + "x" + std::to_string(image.height)
                             + " does not match the lens resolution " + std::to_string(config.lens.resolution[0])
                             + "x" + std::to_string(config.lens.resolution[1]));
  }
  return image;
}

void write_text_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open output file " + path);
  }
  out << text;
}

engine::NetworkSpec make_default_network(std::size_t input_width, std::size_t depth, std::size_t width,
                                         std::uint32_t classes, std::uint32_t seed) {
  std::mt19937 rng(seed);
  engine::NetworkSpec network;
  network.output_classes = classes;
  std::size_t in = input_width;
  for (std::size_t l = 0; l < depth; ++l) {
    const std::size_t out = l + 1 == depth ? classes : width;
    engine::LayerWeights layer;
    layer.weights = Matrix<float>(7 * in, out);
    std::normal_distribution<float> dist(0.0f, 1.0f / std::sqrt(float(7 * in)));
    for (std::size_t r = 0; r < layer.weights.rows(); ++r) {
      for (std::size_t c = 0; c < out; ++c) {
        layer.weights[r][c] = dist(rng);
      }
    }
    layer.bias.assign(out, 0.0f);
    network.layers.push_back(std::move(layer));
    in = out;
  }
  return network;
}

// ---------------------------------------------------------------------------
// subcommands

int cmd_generate(const RunConfig& config) {
  const MeshResult result = load_or_build_mesh(config);
  std::printf("mesh: %zu nodes, %zu rings (%s)\n", result.mesh.nodes.size(), result.mesh.ring_offsets.size(),
              result.cache_hit ? "cache hit" : "generated");
  const PhiSeries series = build_phi_series(config.geometry);
  std::printf("coverage: %.3f m of requested %.3f m%s\n", series.ground_coverage(config.geometry.height),
              config.geometry.max_ground_distance, series.horizon_limited ? " (horizon limited)" : "");
  if (!config.paths.mesh_cache.empty()) {
    std::printf("mesh file: %s\n", config.paths.mesh_cache.c_str());
  }
  return 0;
}

int cmd_project(const RunConfig& config) {
  if (config.paths.output.empty()) {
    throw ConfigError("paths.output is required for project");
  }
  const MeshResult result = load_or_build_mesh(config);
  const Image input = load_input_image(config);
  const OnScreenMesh onscreen = lookup_onscreen(result.mesh, config.camera_pose(), config.lens);

  Image overlay = vmcli::to_rgb(input);
  if (onscreen.size() == 0) {
    std::fprintf(stderr, "warning: no mesh points are visible for this pose and lens\n");
  }
  vmcli::draw_mesh_overlay(overlay, onscreen, {0, 140, 255}, {255, 255, 255});
  io::write_image(overlay, config.paths.output);
  std::printf("projected %zu of %zu nodes onto %s\n", std::size_t(onscreen.size()), result.mesh.nodes.size(),
              config.paths.output.c_str());
  return 0;
}

int cmd_density(const RunConfig& config, std::vector<double> distances, double sweep_min, double sweep_max,
                std::size_t sweep_steps) {
  if (distances.empty()) {
    if (!(sweep_max > sweep_min) || sweep_steps < 1) {
      throw ConfigError("density: needs --distances or a valid --min/--max/--steps sweep");
    }
    for (std::size_t i = 0; i < sweep_steps; ++i) {
      distances.push_back(sweep_steps == 1
                            ? sweep_min
                            : sweep_min + (sweep_max - sweep_min) * double(i) / double(sweep_steps - 1));
    }
  }
  const oracle::DensityReport report =
    oracle::density_sweep(config.geometry, config.camera_pose(), config.lens, distances);
  write_text_output(report.to_csv(), config.paths.output);
  return 0;
}

int cmd_classify(const RunConfig& config, const std::string& overlay_path) {
  if (config.paths.network.empty()) {
    throw ConfigError("paths.network is required for classify");
  }
  const MeshResult result = load_or_build_mesh(config);
  const Image input = load_input_image(config);
  const engine::NetworkSpec network = io::load_network(config.paths.network);

  const OnScreenMesh onscreen = lookup_onscreen(result.mesh, config.camera_pose(), config.lens);
  const engine::NodeFeatures features = sample_image(input, onscreen);
  if (features.cols() != network.layers.front().in_width()) {
    throw std::runtime_error("network input width " + std::to_string(network.layers.front().in_width())
                             + " does not match the sampled feature width " + std::to_string(features.cols()));
  }
  const Matrix<double> probabilities = engine::forward(network, onscreen, features);

  std::ostringstream csv;
  csv << "node_index,pixel_x,pixel_y";
  for (std::uint32_t c = 0; c < network.output_classes; ++c) {
    csv << ",p_" << c;
  }
  csv << "\n";
  char buffer[64];
  for (std::size_t i = 0; i < onscreen.size(); ++i) {
    csv << onscreen.origin_indices[i];
    std::snprintf(buffer, sizeof(buffer), ",%.3f,%.3f", onscreen.pixel_coords[i][0], onscreen.pixel_coords[i][1]);
    csv << buffer;
    for (std::uint32_t c = 0; c < network.output_classes; ++c) {
      std::snprintf(buffer, sizeof(buffer), ",%.9g", probabilities[i][c]);
      csv << buffer;
    }
    csv << "\n";
  }
  write_text_output(csv.str(), config.paths.output);

  // overlay colored by class-0 confidence
  std::string overlay_file = overlay_path;
  if (overlay_file.empty() && !config.paths.output.empty() && config.paths.output != "-") {
    const std::filesystem::path base(config.paths.output);
    overlay_file = (base.parent_path() / base.stem()).string() + ".png";
  }
  if (!overlay_file.empty()) {
    Image overlay = vmcli::to_rgb(input);
    for (std::size_t i = 0; i < onscreen.size(); ++i) {
      const double p = probabilities[i][0];
      vmcli::Color color{96, 96, 96};
      if (p > 0.9) {
        color = {255, 255, 255};
      }
      else if (p > 0.75) {
        color = {255, 255, 0};
      }
      else if (p > 0.5) {
        color = {255, 0, 0};
      }
      else {
        vmcli::put_pixel(overlay, std::int32_t(std::lround(onscreen.pixel_coords[i][0])),
                         std::int32_t(std::lround(onscreen.pixel_coords[i][1])), color);
        continue;
      }
      vmcli::draw_dot(overlay, onscreen.pixel_coords[i][0], onscreen.pixel_coords[i][1], color);
    }
    io::write_image(overlay, overlay_file);
  }
  return 0;
}

int cmd_bench(const RunConfig& config, std::size_t iterations) {
  using clock = std::chrono::steady_clock;
  if (iterations < 1) {
    throw ConfigError("bench: iterations must be at least 1");
  }

  const MeshResult result = load_or_build_mesh(config);
  const CameraPose pose = config.camera_pose();

  engine::NetworkSpec network = config.paths.network.empty()
                                  ? make_default_network(3, 9, 4, 2, 42)
                                  : io::load_network(config.paths.network);
  const std::size_t channels = network.layers.front().in_width();

  Image image;
  if (config.paths.image.empty()) {
    // deterministic noise frame at the lens resolution
    image.width = config.lens.resolution[0];
    image.height = config.lens.resolution[1];
    image.channels = std::int32_t(channels);
    image.pixels.resize(std::size_t(image.width) * std::size_t(image.height) * channels);
    std::uint32_t state = 0x9E3779B9;
    for (std::uint8_t& pixel : image.pixels) {
      state = state * 1664525u + 1013904223u;
      pixel = std::uint8_t(state >> 24);
    }
  }
  else {
    image = load_input_image(config);
    if (std::size_t(image.channels) != channels) {
      throw std::runtime_error("network input width " + std::to_string(channels)
                               + " does not match the image channels " + std::to_string(image.channels));
    }
  }

  std::vector<double> lookup_ms, sample_ms, forward_ms, total_ms;
  std::uint64_t visible = 0;
  const std::size_t warmup = 3;
  for (std::size_t i = 0; i < warmup + iterations; ++i) {
    const auto t0 = clock::now();
    const OnScreenMesh onscreen = lookup_onscreen(result.mesh, pose, config.lens);
    const auto t1 = clock::now();
    const engine::NodeFeatures features = sample_image(image, onscreen);
    const auto t2 = clock::now();
    const Matrix<double> probabilities = engine::forward(network, onscreen, features);
    const auto t3 = clock::now();
    if (i < warmup) {
      continue;
    }
    visible = onscreen.size();
    const auto ms = [](auto a, auto b) { return std::chrono::duration<double, std::milli>(b - a).count(); };
    lookup_ms.push_back(ms(t0, t1));
    sample_ms.push_back(ms(t1, t2));
    forward_ms.push_back(ms(t2, t3));
    total_ms.push_back(ms(t0, t3));
  }

  const auto stats = [](std::vector<double> values) {
    std::sort(values.begin(), values.end());
    double mean = 0.0;
    for (double v : values) {
      mean += v;
    }
    mean /= double(values.size());
    const double median = values[values.size() / 2];
    const double p99 = values[std::size_t(std::ceil(0.99 * double(values.size()))) - 1];
    return std::array<double, 3>{mean, median, p99};
  };

  std::printf("mesh: %zu nodes, %zu visible; network: %zu layers\n", result.mesh.nodes.size(), std::size_t(visible),
              network.layers.size());
  if (iterations == 1) {
    std::printf("single frame: lookup %.3f ms, sample %.3f ms, forward %.3f ms, total %.3f ms\n", lookup_ms[0],
                sample_ms[0], forward_ms[0], total_ms[0]);
  }
  else {
    const auto print = [&stats](const char* name, const std::vector<double>& values) {
      const auto s = stats(values);
      std::printf("%-8s mean %8.3f ms   median %8.3f ms   p99 %8.3f ms\n", name, s[0], s[1], s[2]);
    };
    std::printf("frames: %zu\n", iterations);
    print("lookup", lookup_ms);
    print("sample", sample_ms);
    print("forward", forward_ms);
    print("total", total_ms);
  }
  if (visible > 0) {
    const auto s = stats(total_ms);
    std::printf("per-node: %.1f ns\n", s[0] * 1e6 / double(visible));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Visual mesh generation, projection, density reporting, classification and benchmarking"};
  app.require_subcommand(1);

  ConfigCli generate_cli, project_cli, density_cli, classify_cli, bench_cli;

  CLI::App* generate = app.add_subcommand("generate", "build the mesh and write the cache file");
  add_config_options(generate, generate_cli);

  CLI::App* project = app.add_subcommand("project", "draw the mesh over an image");
  add_config_options(project, project_cli);

  CLI::App* density = app.add_subcommand("density", "object sample density over distance as CSV");
  add_config_options(density, density_cli);
  std::vector<double> distances;
  double sweep_min = 0.5, sweep_max = 9.0;
  std::size_t sweep_steps = 18;
  density->add_option("--distances", distances, "explicit ground distances in metres");
  density->add_option("--min", sweep_min, "sweep start in metres");
  density->add_option("--max", sweep_max, "sweep end in metres");
  density->add_option("--steps", sweep_steps, "sweep point count");

  CLI::App* classify = app.add_subcommand("classify", "run the network over an image");
  add_config_options(classify, classify_cli);
  std::string overlay_path;
  classify->add_option("--overlay", overlay_path, "overlay image path (default: output with .png)");

  CLI::App* bench = app.add_subcommand("bench", "time the lookup + sample + forward pipeline");
  add_config_options(bench, bench_cli);
  std::size_t iterations = 100;
  bench->add_option("-n,--iterations", iterations, "frames to measure");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) {
      return cmd_generate(resolve_config(generate_cli));
    }
    if (project->parsed()) {
      return cmd_project(resolve_config(project_cli));
    }
    if (density->parsed()) {
      return cmd_density(resolve_config(density_cli), distances, sweep_min, sweep_max, sweep_steps);
    }
    if (classify->parsed()) {
      return cmd_classify(resolve_config(classify_cli), overlay_path);
    }
    if (bench->parsed()) {
      return cmd_bench(resolve_config(bench_cli), iterations);
    }
  }
  catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  catch (const std::domain_error& e) {
    // invalid geometry or camera configuration
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
