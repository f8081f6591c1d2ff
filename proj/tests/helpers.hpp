#ifndef VISUALMESH_TESTS_HELPERS_HPP
#define VISUALMESH_TESTS_HELPERS_HPP

// Test-only oracles and checkers. Everything here is written independently of the library code
// paths it validates: the reference engine is a plain per-node loop in double precision, the
// unprojection inverts the lens formulas directly, and the mesh checker re-derives the structural
// rules from scratch.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include <visualmesh/visualmesh.hpp>

namespace vmtest {

using namespace visualmesh;

// ---------------------------------------------------------------------------
// projection inverse (tests only)

inline vec3<double> unproject(const vec2<double>& pixel, const CameraPose& pose, const LensModel& lens) {
  const double dx = pixel[0] - lens.center[0];
  const double dy = pixel[1] - lens.center[1];
  const double rho = std::hypot(dx, dy);
  const double theta = lens.projection == LensProjection::RECTILINEAR
                         ? std::atan(rho / lens.focal_length)
                         : 2.0 * std::asin(rho / (2.0 * lens.focal_length));
  vec3<double> cam{{0.0, 0.0, 1.0}};
  if (rho > 0.0) {
    cam = {{std::sin(theta) * dx / rho, std::sin(theta) * dy / rho, std::cos(theta)}};
  }
  return multiply(transpose(pose.orientation), cam);
}

// ---------------------------------------------------------------------------
// independent root-finding oracles for the geometry module

inline double sphere_iterate(double radius, double height, std::uint64_t steps) {
  double phi = 0.0;
  for (std::uint64_t i = 0; i < steps; ++i) {
    phi = 2.0 * std::atan(radius / (std::cos(phi) * (height - radius)) + std::tan(phi)) - phi;
    if (!(phi < 1.5707963267948966)) {
      return 1.5707963267948966;
    }
  }
  return phi;
}

/// Plain bisection over r1, written before and independently of the library solver.
inline double oracle_subdivided_radius(double height, double r0, std::uint32_t p, std::uint32_t q) {
  const double target = sphere_iterate(r0, height, q);
  const std::uint64_t steps = std::uint64_t(p) * q;
  double lo = 1e-12;
  double hi = r0;
  for (int i = 0; i < 300; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (sphere_iterate(mid, height, steps) < target) {
      lo = mid;
    }
    else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// naive double-precision reference network

/// Per-node, per-output scalar loops; no shared code with engine::forward.
inline Matrix<double> reference_forward(const engine::NetworkSpec& network,
                                        const OnScreenMesh& onscreen,
                                        const Matrix<double>& input) {
  const std::size_t nodes = onscreen.size();
  Matrix<double> features = input;  // (nodes + 1) x width, sentinel last

  for (std::size_t l = 0; l < network.layers.size(); ++l) {
    const engine::LayerWeights& layer = network.layers[l];
    const std::size_t in_width = features.cols();
    const std::size_t out_width = layer.out_width();
    const bool last = l + 1 == network.layers.size();

    Matrix<double> next(nodes + 1, out_width);  // sentinel row stays zero
    std::vector<double> gathered(7 * in_width);
    for (std::size_t i = 0; i < nodes; ++i) {
      for (std::size_t c = 0; c < in_width; ++c) {
        gathered[c] = features[i][c];
      }
      for (int j = 0; j < 6; ++j) {
        const std::uint64_t neighbor = onscreen.neighbors[i][j];
        for (std::size_t c = 0; c < in_width; ++c) {
          gathered[(std::size_t(j) + 1) * in_width + c] = features[neighbor][c];
        }
      }
      for (std::size_t o = 0; o < out_width; ++o) {
        double acc = double(layer.bias[o]);
        for (std::size_t k = 0; k < gathered.size(); ++k) {
          acc += gathered[k] * double(layer.weights[k][o]);
        }
        if (!last) {
          switch (network.hidden_activation) {
            case engine::Activation::SELU:
              acc = acc > 0.0 ? engine::SELU_LAMBDA * acc
                              : engine::SELU_LAMBDA * engine::SELU_ALPHA * (std::exp(acc) - 1.0);
              break;
            case engine::Activation::ELU: acc = acc > 0.0 ? acc : std::exp(acc) - 1.0; break;
            case engine::Activation::RELU: acc = acc > 0.0 ? acc : 0.0; break;
          }
        }
        next[i][o] = acc;
      }
    }
    features = std::move(next);
  }

  // softmax over the logits, sentinel row dropped
  Matrix<double> output(nodes, network.output_classes);
  for (std::size_t i = 0; i < nodes; ++i) {
    double max_logit = features[i][0];
    for (std::size_t c = 1; c < output.cols(); ++c) {
      max_logit = std::max(max_logit, features[i][c]);
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < output.cols(); ++c) {
      output[i][c] = std::exp(features[i][c] - max_logit);
      sum += output[i][c];
    }
    for (std::size_t c = 0; c < output.cols(); ++c) {
      output[i][c] /= sum;
    }
  }
  return output;
}

// ---------------------------------------------------------------------------
// structural mesh checker

/// First structural violation found, or nullopt when the mesh is sound.
inline std::optional<std::string> check_mesh_integrity(const VisualMesh& mesh) {
  const std::size_t total = mesh.nodes.size();
  const std::size_t rings = mesh.ring_offsets.size();
  if (total == 0 || rings == 0) {
    return "mesh is empty";
  }
  auto ring_count = [&](std::size_t n) {
    const std::uint64_t end = n + 1 < rings ? mesh.ring_offsets[n + 1] : total;
    return end - mesh.ring_offsets[n];
  };

  if (mesh.ring_offsets[0] != 0 || ring_count(0) != 1) {
    return "ring 0 must hold exactly the single centre node";
  }

  for (std::size_t i = 0; i < total; ++i) {
    const MeshNode& node = mesh.nodes[i];
    // unit direction
    if (std::abs(norm(node.direction) - 1.0) > 1e-12) {
      return "node " + std::to_string(i) + " direction is not unit length";
    }
    // all six slots valid
    for (const std::uint64_t neighbor : node.neighbors) {
      if (neighbor >= total) {
        return "node " + std::to_string(i) + " has an out-of-range neighbor";
      }
    }
    // ring bookkeeping
    if (node.ring >= rings || i < mesh.ring_offsets[node.ring]
        || i >= mesh.ring_offsets[node.ring] + ring_count(node.ring)) {
      return "node " + std::to_string(i) + " is outside its ring range";
    }
  }

  // centre node: six neighbours on ring 1 (or itself in the degenerate mesh)
  for (const std::uint64_t neighbor : mesh.nodes[0].neighbors) {
    if (rings == 1) {
      if (neighbor != 0) {
        return "degenerate mesh centre must self-reference";
      }
    }
    else if (mesh.nodes[neighbor].ring != 1) {
      return "centre node neighbours must be on ring 1";
    }
  }

  for (std::size_t n = 1; n < rings; ++n) {
    const std::uint64_t offset = mesh.ring_offsets[n];
    const std::uint64_t count = ring_count(n);
    for (std::uint64_t i = 0; i < count; ++i) {
      const MeshNode& node = mesh.nodes[offset + i];
      const std::uint64_t left = node.neighbors[slot::LEFT];
      const std::uint64_t right = node.neighbors[slot::RIGHT];

      // ring cycle symmetry
      if (left != offset + (i + count - 1) % count || right != offset + (i + 1) % count) {
        return "ring " + std::to_string(n) + " node " + std::to_string(i) + " has wrong ring neighbours";
      }
      if (mesh.nodes[left].neighbors[slot::RIGHT] != offset + i && count > 1) {
        return "ring cycle asymmetry at ring " + std::to_string(n) + " node " + std::to_string(i);
      }

      // below slots
      for (int s = slot::BELOW_0; s <= slot::BELOW_1; ++s) {
        const std::uint32_t expected = std::uint32_t(n - 1);
        if (mesh.nodes[node.neighbors[s]].ring != expected) {
          return "ring " + std::to_string(n) + " below-slot does not reference ring " + std::to_string(expected);
        }
      }
      if (n == 1 && (node.neighbors[slot::BELOW_0] != 0 || node.neighbors[slot::BELOW_1] != 0)) {
        return "ring 1 below-slots must reference the centre node";
      }

      // above slots: next ring, or self on the last ring
      for (int s = slot::ABOVE_0; s <= slot::ABOVE_1; ++s) {
        const std::uint64_t neighbor = node.neighbors[s];
        if (n + 1 < rings) {
          if (mesh.nodes[neighbor].ring != n + 1) {
            return "ring " + std::to_string(n) + " above-slot does not reference ring " + std::to_string(n + 1);
          }
        }
        else if (neighbor != offset + i) {
          return "last ring above-slots must self-reference";
        }
      }

      // interior nodes keep six distinct neighbours
      if (n >= 2 && n + 1 < rings && count >= 3) {
        std::array<std::uint64_t, 6> sorted = node.neighbors;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
          return "interior node on ring " + std::to_string(n) + " repeats a neighbour";
        }
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// graph distance (receptive field checks)

/// BFS over the gather edges: distance[i] counts hops from `source` along the links node i reads
/// from, so it bounds which feature rows can influence the output at `source`.
inline std::vector<std::uint32_t> graph_distances(const OnScreenMesh& onscreen, std::uint64_t source) {
  const std::uint32_t unreachable = ~std::uint32_t(0);
  std::vector<std::uint32_t> distance(onscreen.size(), unreachable);
  std::queue<std::uint64_t> frontier;
  distance[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const std::uint64_t node = frontier.front();
    frontier.pop();
    for (const std::uint64_t neighbor : onscreen.neighbors[node]) {
      if (neighbor != onscreen.sentinel() && distance[neighbor] == unreachable) {
        distance[neighbor] = distance[node] + 1;
        frontier.push(neighbor);
      }
    }
  }
  return distance;
}

/// BFS the other way round: how far the feature row at `source` can propagate. The neighbour
/// relation is not perfectly symmetric across rings, so this walks the reversed gather edges.
inline std::vector<std::uint32_t> influence_distances(const OnScreenMesh& onscreen, std::uint64_t source) {
  const std::uint32_t unreachable = ~std::uint32_t(0);
  std::vector<std::vector<std::uint64_t>> fed_by(onscreen.size());
  for (std::uint64_t reader = 0; reader < onscreen.size(); ++reader) {
    for (const std::uint64_t read : onscreen.neighbors[reader]) {
      if (read != onscreen.sentinel()) {
        fed_by[read].push_back(reader);
      }
    }
  }
  std::vector<std::uint32_t> distance(onscreen.size(), unreachable);
  std::queue<std::uint64_t> frontier;
  distance[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const std::uint64_t node = frontier.front();
    frontier.pop();
    for (const std::uint64_t reader : fed_by[node]) {
      if (distance[reader] == unreachable) {
        distance[reader] = distance[node] + 1;
        frontier.push(reader);
      }
    }
  }
  return distance;
}

// ---------------------------------------------------------------------------
// random generation

inline engine::NetworkSpec random_network(std::mt19937& rng, std::size_t input_width, std::size_t depth,
                                          std::size_t width, std::uint32_t classes) {
  engine::NetworkSpec network;
  network.output_classes = classes;
  std::size_t in = input_width;
  for (std::size_t l = 0; l < depth; ++l) {
    const std::size_t out = l + 1 == depth ? classes : width;
    engine::LayerWeights layer;
    layer.weights = Matrix<float>(7 * in, out);
    std::normal_distribution<float> weight_dist(0.0f, 1.0f / std::sqrt(float(7 * in)));
    for (std::size_t r = 0; r < layer.weights.rows(); ++r) {
      for (std::size_t c = 0; c < out; ++c) {
        layer.weights[r][c] = weight_dist(rng);
      }
    }
    layer.bias.resize(out);
    std::normal_distribution<float> bias_dist(0.0f, 0.1f);
    for (float& b : layer.bias) {
      b = bias_dist(rng);
    }
    network.layers.push_back(std::move(layer));
    in = out;
  }
  return network;
}

inline Matrix<float> random_features(std::mt19937& rng, std::size_t nodes, std::size_t width) {
  Matrix<float> features(nodes + 1, width);
  std::uniform_real_distribution<float> dist(0.0f, 1.0f);
  for (std::size_t i = 0; i < nodes; ++i) {
    for (std::size_t c = 0; c < width; ++c) {
      features[i][c] = dist(rng);
    }
  }
  return features;
}

inline Matrix<double> widen(const Matrix<float>& m) {
  Matrix<double> out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      out[r][c] = double(m[r][c]);
    }
  }
  return out;
}

/// A small random but structurally valid mesh configuration.
inline MeshGeometryConfig random_config(std::mt19937& rng) {
  std::uniform_real_distribution<double> height_dist(0.5, 3.0);
  std::uniform_real_distribution<double> radius_frac(0.05, 0.4);
  std::uniform_int_distribution<int> kind_dist(0, 1);
  std::uniform_int_distribution<std::uint32_t> p_dist(1, 4);
  std::uniform_real_distribution<double> reach_dist(1.5, 4.0);

  MeshGeometryConfig config;
  config.height = height_dist(rng);
  config.shape.kind = kind_dist(rng) == 0 ? ShapeKind::CIRCLE : ShapeKind::SPHERE;
  config.shape.radius = radius_frac(rng) * config.height;
  config.density_p = p_dist(rng);
  config.density_q = std::uniform_int_distribution<std::uint32_t>(1, config.density_p)(rng);
  config.max_ground_distance = reach_dist(rng) * config.height;
  return config;
}

}  // namespace vmtest

#endif  // VISUALMESH_TESTS_HELPERS_HPP
