// Acceptance suite: runs every release criterion end to end and prints one pass/fail line each.
// Exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <visualmesh/visualmesh.hpp>

#include "helpers.hpp"

using namespace visualmesh;

namespace {

constexpr double PI = 3.141592653589793238462643383279502884;

// the soccer-style validation setup: ball on the floor seen by a wide fisheye looking down.
// max_ground_distance of 12 m keeps every swept object's full tangent window inside coverage.
const MeshGeometryConfig BALL_CONFIG{1.1, {ShapeKind::SPHERE, 0.095}, 4, 1, 12.0};
const LensModel WIDE_LENS{LensProjection::EQUISOLID, 330.0, {{512.0, 512.0}}, {{1024, 1024}}, PI};
const CameraPose DOWN{1.1, identity_mat3<double>()};

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// 1. constant-density invariant

Outcome constant_density() {
  const auto start = std::chrono::steady_clock::now();
  std::uint64_t low = ~std::uint64_t(0), high = 0;
  for (int i = 0; i < 200; ++i) {
    const double distance = 0.5 + (9.0 - 0.5) * double(i) / 199.0;
    const std::uint64_t count = oracle::count_ring_intersections(BALL_CONFIG, distance);
    low = std::min(low, count);
    high = std::max(high, count);
  }
  const double elapsed = seconds_since(start);
  std::ostringstream detail;
  detail << "ring intersections in [" << low << ", " << high << "] over 200 distances, " << elapsed << " s";
  return {low >= 3 && high <= 5 && elapsed < 5.0, detail.str()};
}

// ---------------------------------------------------------------------------
// 2. hexagonal contrast

Outcome hexagonal_contrast() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<double> distances;
  for (double d = 1.0; d <= 9.01; d += 0.5) {
    distances.push_back(d);
  }
  const oracle::DensityReport report = oracle::density_sweep(BALL_CONFIG, DOWN, WIDE_LENS, distances);

  std::uint64_t mesh_min = ~std::uint64_t(0), mesh_max = 0;
  std::uint64_t hex_2m = 0, hex_8m = 0;
  for (const auto& row : report.rows) {
    mesh_min = std::min(mesh_min, row.mesh_point_count);
    mesh_max = std::max(mesh_max, row.mesh_point_count);
    if (row.ground_distance == 2.0) {
      hex_2m = row.hex_point_count;
    }
    if (row.ground_distance == 8.0) {
      hex_8m = row.hex_point_count;
    }
  }
  const double elapsed = seconds_since(start);
  const double mesh_ratio = double(mesh_max) / double(mesh_min);
  const bool pass = mesh_min > 0 && double(hex_8m) <= 0.25 * double(hex_2m) && mesh_ratio <= 2.0 && elapsed < 10.0;
  std::ostringstream detail;
  detail << "hex " << hex_8m << " @8m vs " << hex_2m << " @2m (gate 25%), mesh max/min " << mesh_ratio << ", "
         << elapsed << " s";
  return {pass, detail.str()};
}

// ---------------------------------------------------------------------------
// 3. circle closed form

Outcome circle_closed_form() {
  std::mt19937 rng(314159);
  std::uniform_real_distribution<double> h_dist(0.5, 3.0);
  std::uniform_real_distribution<double> r_frac(0.02, 0.5);
  std::uniform_int_distribution<std::uint32_t> p_dist(1, 8);
  double worst = 0.0;
  for (int config = 0; config < 100; ++config) {
    const double h = h_dist(rng);
    const double r = r_frac(rng) * h;
    const std::uint32_t p = p_dist(rng);
    const std::uint32_t q = std::uniform_int_distribution<std::uint32_t>(1, p)(rng);
    const double step = 2.0 * r * double(q) / double(p);
    double phi = 0.0;
    for (int n = 1; n <= 10000; ++n) {
      phi = phi_next_circle(phi, h, step);
      worst = std::max(worst, std::abs(phi - std::atan(double(n) * step / h)));
    }
  }
  std::ostringstream detail;
  detail << "worst angle deviation " << worst << " rad over 100 configs x 1e4 rings";
  return {worst < 1e-12, detail.str()};
}

// ---------------------------------------------------------------------------
// 4. subdivision fixed point

Outcome subdivision_fixed_point() {
  std::mt19937 rng(271828);
  std::uniform_real_distribution<double> h_dist(0.8, 2.5);
  std::uniform_real_distribution<double> r_frac(0.02, 0.22);
  const std::pair<std::uint32_t, std::uint32_t> densities[] = {{2, 1}, {3, 1}, {4, 1}, {3, 2}};
  double worst = 0.0;
  for (const auto& [p, q] : densities) {
    for (int i = 0; i < 50; ++i) {
      const double h = h_dist(rng);
      const double r0 = r_frac(rng) * h;
      const double r1 = solve_subdivided_radius(h, r0, p, q);
      const double residual =
        std::abs(vmtest::sphere_iterate(r0, h, q) - vmtest::sphere_iterate(r1, h, std::uint64_t(p) * q));
      worst = std::max(worst, residual);
    }
  }
  std::ostringstream detail;
  detail << "worst |f^q(r0) - f^pq(r1)| = " << worst << " rad over 4 densities x 50 draws";
  return {worst < 1e-12, detail.str()};
}

// ---------------------------------------------------------------------------
// 5. graph integrity fuzz

Outcome graph_integrity() {
  std::mt19937 rng(161803);
  for (int trial = 0; trial < 500; ++trial) {
    const MeshGeometryConfig config = vmtest::random_config(rng);
    const VisualMesh mesh = build_mesh(config);
    if (const auto violation = vmtest::check_mesh_integrity(mesh)) {
      std::ostringstream detail;
      detail << "trial " << trial << ": " << *violation << " (h=" << config.height << " r=" << config.shape.radius
             << " kind=" << int(config.shape.kind) << " p=" << config.density_p << " q=" << config.density_q
             << " max=" << config.max_ground_distance << ")";
      return {false, detail.str()};
    }
  }
  return {true, "500 random configurations pass degree, cycle and boundary checks"};
}

// ---------------------------------------------------------------------------
// 6. projection round-trip

Outcome projection_round_trip() {
  std::mt19937 rng(141421);
  const LensModel equisolid{LensProjection::EQUISOLID, 250.0, {{512.0, 512.0}}, {{1024, 1024}}, 2.8};
  const LensModel rectilinear{LensProjection::RECTILINEAR, 300.0, {{512.0, 512.0}}, {{1024, 1024}}, 1.0};
  const CameraPose pose{1.3, orientation_from_euler(0.4, 0.9, -0.7)};

  double worst = 0.0;
  for (const LensModel& lens : {equisolid, rectilinear}) {
    std::uniform_real_distribution<double> cos_dist(std::cos(lens.fov - 1e-6), 1.0);
    std::uniform_real_distribution<double> azimuth_dist(0.0, 2.0 * PI);
    for (int i = 0; i < 100000; ++i) {
      const double cos_theta = cos_dist(rng);
      const double sin_theta = std::sqrt(1.0 - cos_theta * cos_theta);
      const double azimuth = azimuth_dist(rng);
      const vec3<double> cam{{sin_theta * std::cos(azimuth), sin_theta * std::sin(azimuth), cos_theta}};
      const vec3<double> direction = multiply(transpose(pose.orientation), cam);

      const auto pixel = project_node(direction, pose, lens);
      if (!pixel) {
        return {false, "an in-fov direction failed to project"};
      }
      const vec3<double> back = vmtest::unproject(*pixel, pose, lens);
      const double error = std::sqrt((back[0] - direction[0]) * (back[0] - direction[0])
                                     + (back[1] - direction[1]) * (back[1] - direction[1])
                                     + (back[2] - direction[2]) * (back[2] - direction[2]));
      worst = std::max(worst, error);
    }
  }
  std::ostringstream detail;
  detail << "worst inversion error " << worst << " over 2 x 1e5 directions";
  return {worst < 1e-9, detail.str()};
}

// ---------------------------------------------------------------------------
// 7 & 8 share random instances

MeshGeometryConfig small_mesh_config(std::mt19937& rng) {
  std::uniform_real_distribution<double> h_dist(1.0, 2.0);
  std::uniform_real_distribution<double> r_frac(0.2, 0.35);
  std::uniform_int_distribution<int> kind(0, 1);
  MeshGeometryConfig config;
  config.height = h_dist(rng);
  config.shape.kind = kind(rng) == 0 ? ShapeKind::CIRCLE : ShapeKind::SPHERE;
  config.shape.radius = r_frac(rng) * config.height;
  config.density_p = std::uniform_int_distribution<std::uint32_t>(1, 2)(rng);
  config.density_q = 1;
  config.max_ground_distance = std::uniform_real_distribution<double>(1.2, 2.0)(rng) * config.height;
  return config;
}

Outcome engine_equivalence() {
  std::mt19937 rng(577215);
  double worst = 0.0;
  int field_checks = 0;
  for (int trial = 0; trial < 100; ++trial) {
    MeshGeometryConfig config = small_mesh_config(rng);
    VisualMesh mesh = build_mesh(config);
    while (mesh.nodes.size() > 1000) {
      config.max_ground_distance *= 0.8;
      mesh = build_mesh(config);
    }
    const OnScreenMesh onscreen = lookup_onscreen(mesh, {config.height, identity_mat3<double>()}, WIDE_LENS);
    if (onscreen.size() == 0) {
      return {false, "random instance lost all nodes"};
    }

    // perturbation trials use shallow nets so nodes beyond the receptive field exist
    const bool check_field = trial % 5 == 0;
    const std::size_t depth = check_field ? std::uniform_int_distribution<std::size_t>(1, 3)(rng)
                                          : std::uniform_int_distribution<std::size_t>(1, 9)(rng);
    const engine::NetworkSpec network = vmtest::random_network(rng, 3, depth, 4, 2);
    const Matrix<float> features = vmtest::random_features(rng, onscreen.size(), 3);

    const Matrix<double> engine_out = engine::forward(network, onscreen, features);
    const Matrix<double> reference = vmtest::reference_forward(network, onscreen, vmtest::widen(features));
    for (std::size_t i = 0; i < engine_out.rows(); ++i) {
      for (std::size_t c = 0; c < engine_out.cols(); ++c) {
        const double scale = std::max(1.0, std::abs(reference[i][c]));
        worst = std::max(worst, std::abs(engine_out[i][c] - reference[i][c]) / scale);
      }
    }

    // receptive-field perturbation: bit-equal outside the influence ball. Observing an
    // outer-ring node keeps nodes beyond the field available even on small meshes.
    if (check_field) {
      const std::uint64_t observed = onscreen.size() - 1;
      const std::vector<std::uint32_t> field = vmtest::graph_distances(onscreen, observed);
      std::uint64_t far_node = onscreen.size();
      for (std::size_t i = 0; i < field.size(); ++i) {
        if (field[i] != ~std::uint32_t(0) && field[i] > depth) {
          far_node = i;
          break;
        }
      }
      if (far_node == onscreen.size()) {
        continue;  // mesh too small for this depth
      }
      Matrix<float> perturbed = features;
      perturbed[far_node][0] += 5.0f;
      const Matrix<double> changed = engine::forward(network, onscreen, perturbed);
      const std::vector<std::uint32_t> influence = vmtest::influence_distances(onscreen, far_node);
      for (std::size_t i = 0; i < onscreen.size(); ++i) {
        if (influence[i] == ~std::uint32_t(0) || influence[i] > depth) {
          if (std::memcmp(&engine_out[i][0], &changed[i][0], 2 * sizeof(double)) != 0) {
            return {false, "receptive-field perturbation leaked to an out-of-range node"};
          }
        }
      }
      ++field_checks;
    }
  }
  std::ostringstream detail;
  detail << "worst relative deviation " << worst << " over 100 instances; " << field_checks
         << " perturbation checks bit-equal";
  return {worst < 1e-6 && field_checks >= 15, detail.str()};
}

Outcome softmax_and_permutation() {
  std::mt19937 rng(693147);
  double worst_sum = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    MeshGeometryConfig config = small_mesh_config(rng);
    const VisualMesh mesh = build_mesh(config);
    const OnScreenMesh onscreen = lookup_onscreen(mesh, {config.height, identity_mat3<double>()}, WIDE_LENS);
    const std::size_t n = onscreen.size();
    if (n < 3) {
      return {false, "random instance too small"};
    }
    const std::uint32_t classes = std::uniform_int_distribution<std::uint32_t>(2, 5)(rng);
    const engine::NetworkSpec network =
      vmtest::random_network(rng, 3, std::uniform_int_distribution<std::size_t>(1, 5)(rng), 4, classes);
    const Matrix<float> features = vmtest::random_features(rng, n, 3);

    const Matrix<double> output = engine::forward(network, onscreen, features);
    for (std::size_t i = 0; i < output.rows(); ++i) {
      double sum = 0.0;
      for (std::size_t c = 0; c < output.cols(); ++c) {
        if (output[i][c] < 0.0 || output[i][c] > 1.0) {
          return {false, "probability outside [0, 1]"};
        }
        sum += output[i][c];
      }
      worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    }

    // permute the node order with a consistent remap
    std::vector<std::uint64_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) {
      perm[i] = i;
    }
    std::shuffle(perm.begin(), perm.end(), rng);
    OnScreenMesh shuffled;
    shuffled.pixel_coords.resize(n);
    shuffled.neighbors.resize(n);
    shuffled.origin_indices.resize(n);
    Matrix<double> shuffled_features(n + 1, 3);
    Matrix<float> shuffled_features32(n + 1, 3);
    for (std::size_t old_index = 0; old_index < n; ++old_index) {
      const std::uint64_t new_index = perm[old_index];
      shuffled.pixel_coords[new_index] = onscreen.pixel_coords[old_index];
      shuffled.origin_indices[new_index] = onscreen.origin_indices[old_index];
      for (int j = 0; j < 6; ++j) {
        const std::uint64_t neighbor = onscreen.neighbors[old_index][j];
        shuffled.neighbors[new_index][j] = neighbor == onscreen.sentinel() ? n : perm[neighbor];
      }
      for (std::size_t c = 0; c < 3; ++c) {
        shuffled_features[new_index][c] = double(features[old_index][c]);
        shuffled_features32[new_index][c] = features[old_index][c];
      }
    }

    const Matrix<double> ref_base = vmtest::reference_forward(network, onscreen, vmtest::widen(features));
    const Matrix<double> ref_shuffled = vmtest::reference_forward(network, shuffled, shuffled_features);
    const Matrix<double> engine_shuffled = engine::forward(network, shuffled, shuffled_features32);
    for (std::size_t old_index = 0; old_index < n; ++old_index) {
      const std::uint64_t new_index = perm[old_index];
      if (std::memcmp(&ref_base[old_index][0], &ref_shuffled[new_index][0], classes * sizeof(double)) != 0) {
        return {false, "reference path is not permutation equivariant"};
      }
      if (std::memcmp(&output[old_index][0], &engine_shuffled[new_index][0], classes * sizeof(double)) != 0) {
        return {false, "engine path is not permutation equivariant"};
      }
    }
  }
  std::ostringstream detail;
  detail << "worst row-sum deviation " << worst_sum << "; permutations bit-exact over 20 instances";
  return {worst_sum < 1e-9, detail.str()};
}

// ---------------------------------------------------------------------------
// 9. performance scaling

struct TimedMesh {
  std::uint64_t visible = 0;
  double median_ms = 0.0;
};

TimedMesh time_pipeline(const MeshGeometryConfig& config, const engine::NetworkSpec& network, int repetitions) {
  const VisualMesh mesh = build_mesh(config);
  const CameraPose pose{config.height, identity_mat3<double>()};

  Image frame;
  frame.width = WIDE_LENS.resolution[0];
  frame.height = WIDE_LENS.resolution[1];
  frame.channels = 3;
  frame.pixels.resize(std::size_t(frame.width) * std::size_t(frame.height) * 3);
  std::uint32_t state = 0xC0FFEE;
  for (auto& pixel : frame.pixels) {
    state = state * 1664525u + 1013904223u;
    pixel = std::uint8_t(state >> 24);
  }

  std::vector<double> times;
  TimedMesh result;
  for (int i = 0; i < repetitions + 2; ++i) {
    const auto start = std::chrono::steady_clock::now();
    const OnScreenMesh onscreen = lookup_onscreen(mesh, pose, WIDE_LENS);
    const engine::NodeFeatures features = sample_image(frame, onscreen);
    const Matrix<double> probabilities = engine::forward(network, onscreen, features);
    const double elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (i >= 2) {  // warmup discarded
      times.push_back(elapsed);
    }
    result.visible = onscreen.size();
  }
  std::sort(times.begin(), times.end());
  result.median_ms = times[times.size() / 2];
  return result;
}

Outcome performance_scaling() {
  std::mt19937 rng(42);
  const engine::NetworkSpec deep = vmtest::random_network(rng, 3, 9, 4, 2);
  const engine::NetworkSpec shallow = vmtest::random_network(rng, 3, 5, 4, 2);

  const double reaches[] = {2.0, 2.9, 4.2, 6.1, 8.8};
  std::vector<double> nodes, times;
  for (const double reach : reaches) {
    MeshGeometryConfig config = BALL_CONFIG;
    config.max_ground_distance = reach;
    const TimedMesh timed = time_pipeline(config, deep, 13);
    nodes.push_back(double(timed.visible));
    times.push_back(timed.median_ms);
  }

  // least squares fit time = a + b * nodes
  const std::size_t count = nodes.size();
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    mean_x += nodes[i];
    mean_y += times[i];
  }
  mean_x /= double(count);
  mean_y /= double(count);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    sxx += (nodes[i] - mean_x) * (nodes[i] - mean_x);
    sxy += (nodes[i] - mean_x) * (times[i] - mean_y);
    syy += (times[i] - mean_y) * (times[i] - mean_y);
  }
  const double slope = sxy / sxx;
  const double intercept = mean_y - slope * mean_x;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double predicted = intercept + slope * nodes[i];
    ss_res += (times[i] - predicted) * (times[i] - predicted);
  }
  const double r_squared = 1.0 - ss_res / syy;

  // depth ratio on the mid-size mesh
  MeshGeometryConfig mid = BALL_CONFIG;
  mid.max_ground_distance = 4.2;
  const TimedMesh deep_timed = time_pipeline(mid, deep, 13);
  const TimedMesh shallow_timed = time_pipeline(mid, shallow, 13);
  const double depth_ratio = deep_timed.median_ms / shallow_timed.median_ms;

  // informational target from the reference hardware, not gated
  MeshGeometryConfig ten_k = BALL_CONFIG;
  ten_k.max_ground_distance = 4.4;
  const TimedMesh info = time_pipeline(ten_k, deep, 13);

  std::ostringstream detail;
  detail << "R^2 " << r_squared << " over " << std::uint64_t(nodes.front()) << ".." << std::uint64_t(nodes.back())
         << " nodes, 9/5-layer ratio " << depth_ratio << "; informational: " << info.visible << " nodes in "
         << info.median_ms << " ms/frame";
  return {r_squared >= 0.95 && depth_ratio < 2.5 && nodes.back() >= 4.0 * nodes.front(), detail.str()};
}

// ---------------------------------------------------------------------------
// 10. singularity behaviour

Outcome singularity_behaviour() {
  const VisualMesh mesh = build_mesh(BALL_CONFIG);
  const std::uint64_t below = oracle::count_nodes_in_object(mesh, DOWN, WIDE_LENS, {{0.0, 0.0}}, 0.095);
  std::vector<std::uint64_t> mid_range;
  for (double distance = 1.0; distance <= 9.01; distance += 0.5) {
    mid_range.push_back(oracle::count_nodes_in_object(mesh, DOWN, WIDE_LENS, {{distance, 0.0}}, 0.095));
  }
  std::sort(mid_range.begin(), mid_range.end());
  const std::uint64_t median = mid_range[mid_range.size() / 2];

  // clamp totality fuzz
  std::mt19937 rng(86602);
  std::uniform_real_distribution<double> phi_dist(0.0, PI / 2);
  std::uniform_real_distribution<double> h_dist(0.01, 10.0);
  std::uniform_real_distribution<double> r_dist(1e-9, 8.0);
  for (int i = 0; i < 100000; ++i) {
    const double phi = i == 0 ? 0.0 : (i == 1 ? PI / 2 : phi_dist(rng));
    const double value = delta_theta(phi, h_dist(rng), r_dist(rng));
    if (!std::isfinite(value) || value <= 0.0 || value > PI) {
      return {false, "delta theta left (0, pi] under fuzz"};
    }
  }

  std::ostringstream detail;
  detail << "below-camera count " << below << " vs mid-range median " << median << "; clamp fuzz clean";
  return {below > median, detail.str()};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
    {"constant density: k=4 ball keeps 3..5 ring intersections over 0.5..9 m", constant_density},
    {"hexagonal contrast: hex decays to <=25% while mesh stays within 2x", hexagonal_contrast},
    {"circle closed form: tan(phi_n) telescopes to n*2r/h within 1e-12", circle_closed_form},
    {"subdivision fixed point: f^q(r0) = f^pq(r1) within 1e-12", subdivision_fixed_point},
    {"graph integrity: 500 fuzzed meshes pass structural checks", graph_integrity},
    {"projection round-trip: both lenses invert to 1e-9", projection_round_trip},
    {"engine equivalence: forward matches the double reference to 1e-6", engine_equivalence},
    {"softmax and permutation properties hold", softmax_and_permutation},
    {"performance: frame time linear in nodes (R^2 >= 0.95), 9/5 ratio < 2.5", performance_scaling},
    {"singularity: below-camera peak and total delta-theta clamp", singularity_behaviour},
  };

  int failures = 0;
  int index = 0;
  for (const Criterion& criterion : criteria) {
    ++index;
    Outcome outcome;
    try {
      outcome = criterion.run();
    }
    catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %2d: %s — %s\n", outcome.pass ? "PASS" : "FAIL", index, criterion.name,
                outcome.detail.c_str());
    std::fflush(stdout);
    failures += outcome.pass ? 0 : 1;
  }
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
  }
  else {
    std::printf("all %d criteria passed\n", index);
  }
  return failures;
}
