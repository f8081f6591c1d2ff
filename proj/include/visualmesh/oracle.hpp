#ifndef VISUALMESH_ORACLE_HPP
#define VISUALMESH_ORACLE_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "camera.hpp"
#include "lens.hpp"
#include "mesh.hpp"
#include "util/math.hpp"

namespace visualmesh {
namespace oracle {

  /**
   * Brute-force validators for the mesh's constant-density claim, plus the hexagonal image-space
   * baseline it is compared against. Everything below recomputes its answers from first
   * principles: the ring series is rebuilt here (closed form for circles, the tangent-triangle
   * recursion for spheres), projection and intersection tests are written out directly, and none
   * of it calls into the mesh generation path it is checking.
   */

  namespace detail {

    constexpr double PI = 3.141592653589793238462643383279502884;
    constexpr double HALF_PI = 1.5707963267948966;

    // Sphere ring step from the tangent construction: the ray advances by the ground run d_phi
    // plus the tangent offset d_r before doubling the half-angle.
    inline double sphere_step(double phi, double height, double radius) {
      const double d_phi = height * std::tan(phi);
      const double d_r = radius * (1.0 - std::sin(phi)) / std::cos(phi);
      return 2.0 * std::atan((d_phi + d_r) / (height - radius)) - phi;
    }

    inline double sphere_terminal_angle(double radius, double height, std::uint64_t steps) {
      double phi = 0.0;
      for (std::uint64_t i = 0; i < steps; ++i) {
        phi = sphere_step(phi, height, radius);
        if (!(phi < HALF_PI)) {
          return HALF_PI;
        }
      }
      return phi;
    }

    // Independent small-radius solve: interval bisection to a fixed iteration budget.
    inline double subdivided_sphere_radius(double height, double radius, std::uint32_t p, std::uint32_t q) {
      if (p == q) {
        return radius;
      }
      const double target = sphere_terminal_angle(radius, height, q);
      const std::uint64_t steps = std::uint64_t(p) * q;
      double lo = radius * 1e-9;
      double hi = radius;
      for (int i = 0; i < 120; ++i) {
        const double mid = 0.5 * (lo + hi);
        (sphere_terminal_angle(mid, height, steps) < target ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }

    // Every ring inclination the configuration generates, recomputed from scratch.
    inline std::vector<double> ring_angles(const MeshGeometryConfig& config) {
      if (!(config.height > 0.0) || !(config.shape.radius > 0.0) || !(config.max_ground_distance > 0.0)
          || config.density_q < 1 || config.density_p < config.density_q
          || (config.shape.kind == ShapeKind::SPHERE && !(config.height > config.shape.radius))) {
        throw std::domain_error("oracle: invalid mesh geometry configuration");
      }
      std::vector<double> angles{0.0};
      const double h = config.height;
      const double bound = config.max_ground_distance * (1.0 + 1e-9);
      if (config.shape.kind == ShapeKind::CIRCLE) {
        // closed form: tan(phi_n) = n * 2 r_eff / h
        const double step = 2.0 * config.shape.radius * double(config.density_q) / double(config.density_p) / h;
        for (std::uint64_t n = 1;; ++n) {
          const double ground = double(n) * step * h;
          if (ground > bound) {
            break;
          }
          angles.push_back(std::atan(double(n) * step));
        }
      }
      else {
        const double r1 = subdivided_sphere_radius(h, config.shape.radius, config.density_p, config.density_q);
        for (;;) {
          const double next = sphere_step(angles.back(), h, r1);
          if (!(next < HALF_PI) || h * std::tan(next) > bound) {
            break;
          }
          angles.push_back(next);
        }
      }
      return angles;
    }

    // Angular radius of a sphere resting on the plane, seen from the camera.
    inline double sphere_angular_radius(double distance_to_center, double radius) {
      const double ratio = radius / distance_to_center;
      return std::asin(ratio < 1.0 ? ratio : 1.0);
    }

    // Pixel coordinate for a plane-frame direction, or false when off the sensor.
    inline bool pixel_from_direction(const vec3<double>& direction,
                                     const CameraPose& pose,
                                     const LensModel& lens,
                                     vec2<double>& pixel) {
      const vec3<double> cam = multiply(pose.orientation, direction);
      const double cos_theta = cam[2] > 1.0 ? 1.0 : (cam[2] < -1.0 ? -1.0 : cam[2]);
      const double theta = std::acos(cos_theta);
      if (theta > lens.fov) {
        return false;
      }
      double rho = 0.0;
      if (lens.projection == LensProjection::RECTILINEAR) {
        if (theta >= HALF_PI) {
          return false;
        }
        rho = lens.focal_length * std::tan(theta);
      }
      else {
        rho = 2.0 * lens.focal_length * std::sin(0.5 * theta);
      }
      const double r_xy = std::hypot(cam[0], cam[1]);
      pixel = lens.center;
      if (r_xy > 0.0) {
        pixel[0] += rho * cam[0] / r_xy;
        pixel[1] += rho * cam[1] / r_xy;
      }
      return pixel[0] >= 0.0 && pixel[0] < double(lens.resolution[0]) && pixel[1] >= 0.0
             && pixel[1] < double(lens.resolution[1]);
    }

    // Plane-frame ray for a pixel, or false when the pixel maps outside the lens image circle.
    inline bool direction_from_pixel(const vec2<double>& pixel,
                                     const CameraPose& pose,
                                     const LensModel& lens,
                                     vec3<double>& direction) {
      const double dx = pixel[0] - lens.center[0];
      const double dy = pixel[1] - lens.center[1];
      const double rho = std::hypot(dx, dy);
      double theta = 0.0;
      if (lens.projection == LensProjection::RECTILINEAR) {
        theta = std::atan(rho / lens.focal_length);
      }
      else {
        const double arg = rho / (2.0 * lens.focal_length);
        if (arg > 1.0) {
          return false;
        }
        theta = 2.0 * std::asin(arg);
      }
      vec3<double> cam{{0.0, 0.0, 1.0}};
      if (rho > 0.0) {
        const double sin_theta = std::sin(theta);
        cam = {{sin_theta * dx / rho, sin_theta * dy / rho, std::cos(theta)}};
      }
      direction = multiply(transpose(pose.orientation), cam);
      return true;
    }

    // Does a camera ray pass through the target object resting at the given ground position?
    inline bool ray_hits_object(const vec3<double>& ray,
                                const TargetShape& shape,
                                const vec2<double>& ground_position,
                                double camera_height) {
      if (shape.kind == ShapeKind::SPHERE) {
        const vec3<double> center{{ground_position[0], ground_position[1], camera_height - shape.radius}};
        const double dist = norm(center);
        const double cos_angle = dot(ray, center) / dist;
        const double angle = std::acos(cos_angle > 1.0 ? 1.0 : (cos_angle < -1.0 ? -1.0 : cos_angle));
        return angle <= sphere_angular_radius(dist, shape.radius);
      }
      // circle: intersect the ray with the plane and test the ground point
      if (!(ray[2] > 0.0)) {
        return false;
      }
      const double scale = camera_height / ray[2];
      const double gx = ray[0] * scale - ground_position[0];
      const double gy = ray[1] * scale - ground_position[1];
      return std::hypot(gx, gy) <= shape.radius;
    }

  }  // namespace detail

  /**
   * @brief Analytic ring-intersection count, mesh-free.
   *
   * Counts the rings of the configured series whose cone crosses the target object placed at the
   * given ground distance: by exact angular overlap for spheres, by ground-circle overlap for
   * circles.
   */
  inline std::uint64_t count_ring_intersections(const MeshGeometryConfig& config, double distance) {
    if (!(distance >= 0.0)) {
      throw std::invalid_argument("count_ring_intersections: distance must be non-negative");
    }
    const std::vector<double> angles = detail::ring_angles(config);
    std::uint64_t count = 0;
    if (config.shape.kind == ShapeKind::SPHERE) {
      const double r = config.shape.radius;
      const double center_distance = std::hypot(distance, config.height - r);
      const double phi_center = std::atan2(distance, config.height - r);
      const double angular_radius = detail::sphere_angular_radius(center_distance, r);
      for (double phi : angles) {
        count += std::abs(phi - phi_center) <= angular_radius ? 1 : 0;
      }
    }
    else {
      for (double phi : angles) {
        count += std::abs(config.height * std::tan(phi) - distance) <= config.shape.radius ? 1 : 0;
      }
    }
    return count;
  }

  /**
   * @brief Count the visible mesh nodes whose ray passes through an object.
   *
   * Visibility and the per-node geometric test are recomputed here directly from the node rays.
   */
  inline std::uint64_t count_nodes_in_object(const VisualMesh& mesh,
                                             const CameraPose& pose,
                                             const LensModel& lens,
                                             const vec2<double>& ground_position,
                                             double radius) {
    const TargetShape shape{mesh.config.shape.kind, radius};
    std::uint64_t count = 0;
    vec2<double> pixel{};
    for (const MeshNode& node : mesh.nodes) {
      if (detail::pixel_from_direction(node.direction, pose, lens, pixel)
          && detail::ray_hits_object(node.direction, shape, ground_position, pose.height)) {
        ++count;
      }
    }
    return count;
  }

  /**
   * @brief A regular hexagonal image-space lattice with six-neighbour links.
   *
   * The baseline sampler the mesh is compared against: equal point budget, no distance-dependent
   * density correction. Neighbour slots follow the mesh order [left, right, below x2, above x2];
   * missing neighbours at the image border map to the sentinel index (== points.size()).
   */
  struct HexGrid {
    std::vector<vec2<double>> points;
    std::vector<std::array<std::uint64_t, 6>> neighbors;
    double spacing = 0.0;

    std::uint64_t size() const {
      return points.size();
    }
    std::uint64_t sentinel() const {
      return points.size();
    }
  };

  namespace detail {
    struct HexRow {
      double y = 0.0;
      double x0 = 0.0;
      std::uint64_t columns = 0;
      std::uint64_t start = 0;
    };

    inline std::vector<HexRow> hex_rows(const LensModel& lens, double spacing) {
      const double width = double(lens.resolution[0]);
      const double height = double(lens.resolution[1]);
      const double row_height = spacing * 0.86602540378443864676;  // sqrt(3)/2
      std::vector<HexRow> rows;
      std::uint64_t start = 0;
      for (std::uint64_t j = 0;; ++j) {
        const double y = 0.5 * row_height + double(j) * row_height;
        if (y >= height) {
          break;
        }
        const double x0 = 0.5 * spacing + (j % 2 == 1 ? 0.5 * spacing : 0.0);
        std::uint64_t columns = 0;
        if (x0 < width) {
          columns = std::uint64_t(std::floor((width - x0) / spacing)) + 1;
          while (columns > 0 && x0 + double(columns - 1) * spacing >= width) {
            --columns;
          }
        }
        rows.push_back({y, x0, columns, start});
        start += columns;
      }
      return rows;
    }

    inline std::uint64_t hex_point_count(const LensModel& lens, double spacing) {
      std::uint64_t total = 0;
      for (const HexRow& row : hex_rows(lens, spacing)) {
        total += row.columns;
      }
      return total;
    }
  }  // namespace detail

  inline HexGrid hexagonal_grid(const LensModel& lens, double spacing) {
    if (!(spacing > 0.0)) {
      throw std::invalid_argument("hexagonal_grid: spacing must be positive");
    }
    const std::vector<detail::HexRow> rows = detail::hex_rows(lens, spacing);

    HexGrid grid;
    grid.spacing = spacing;
    for (const detail::HexRow& row : rows) {
      for (std::uint64_t i = 0; i < row.columns; ++i) {
        grid.points.push_back({{row.x0 + double(i) * spacing, row.y}});
      }
    }

    const std::uint64_t sentinel = grid.sentinel();
    grid.neighbors.resize(grid.points.size(), {sentinel, sentinel, sentinel, sentinel, sentinel, sentinel});
    for (std::size_t j = 0; j < rows.size(); ++j) {
      const detail::HexRow& row = rows[j];
      for (std::uint64_t i = 0; i < row.columns; ++i) {
        auto& links = grid.neighbors[row.start + i];
        links[0] = i > 0 ? row.start + i - 1 : sentinel;
        links[1] = i + 1 < row.columns ? row.start + i + 1 : sentinel;
        const double x = row.x0 + double(i) * spacing;
        for (int adjacent = 0; adjacent < 2; ++adjacent) {
          const int slot = 2 + 2 * adjacent;  // below pair then above pair
          const std::size_t m = adjacent == 0 ? j - 1 : j + 1;
          if ((adjacent == 0 && j == 0) || m >= rows.size()) {
            continue;
          }
          const detail::HexRow& other = rows[m];
          const auto base = std::int64_t(std::floor((x - other.x0) / spacing));
          for (int o = 0; o < 2; ++o) {
            const std::int64_t c = base + o;
            if (c >= 0 && std::uint64_t(c) < other.columns) {
              links[slot + o] = other.start + std::uint64_t(c);
            }
          }
        }
      }
    }
    return grid;
  }

  /**
   * @brief Find the lattice spacing giving the same point budget as a reference mesh lookup.
   *
   * The count is a step function of spacing; bisection lands on the step containing the target.
   * Throws when no spacing matches the target within 2%.
   */
  inline double solve_hex_spacing(const LensModel& lens, std::uint64_t target_count) {
    if (target_count == 0) {
      throw std::invalid_argument("solve_hex_spacing: target count must be positive");
    }
    const double area = double(lens.resolution[0]) * double(lens.resolution[1]);
    double guess = std::sqrt(area / (double(target_count) * 0.86602540378443864676));
    double lo = guess / 8.0;
    double hi = guess * 8.0;
    for (int i = 0; i < 64; ++i) {
      const double mid = 0.5 * (lo + hi);
      (detail::hex_point_count(lens, mid) > target_count ? lo : hi) = mid;
    }
    // pick whichever bracket end lands closer
    const std::uint64_t count_lo = detail::hex_point_count(lens, lo);
    const std::uint64_t count_hi = detail::hex_point_count(lens, hi);
    const auto error = [target_count](std::uint64_t c) {
      return c > target_count ? c - target_count : target_count - c;
    };
    const double spacing = error(count_lo) < error(count_hi) ? lo : hi;
    const std::uint64_t count = detail::hex_point_count(lens, spacing);
    if (double(error(count)) > 0.02 * double(target_count)) {
      throw std::runtime_error("solve_hex_spacing: no spacing matches " + std::to_string(target_count)
                               + " points within 2% (closest " + std::to_string(count) + ")");
    }
    return spacing;
  }

  /**
   * @brief One row of the density-over-distance comparison.
   */
  struct DensityRow {
    double ground_distance = 0.0;
    std::uint64_t mesh_point_count = 0;
    std::uint64_t ring_intersection_count = 0;
    std::uint64_t hex_point_count = 0;
  };

  struct DensityReport {
    std::vector<DensityRow> rows;

    /// CSV with six-significant-digit distances
    std::string to_csv() const {
      std::string out = "distance_m,mesh_points,ring_intersections,hex_points\n";
      char line[128];
      for (const DensityRow& row : rows) {
        std::snprintf(line, sizeof(line), "%.6g,%llu,%llu,%llu\n", row.ground_distance,
                      static_cast<unsigned long long>(row.mesh_point_count),
                      static_cast<unsigned long long>(row.ring_intersection_count),
                      static_cast<unsigned long long>(row.hex_point_count));
        out += line;
      }
      return out;
    }
  };

  /**
   * @brief Run the mesh counter, the analytic ring counter and the hex baseline over a distance
   *        sweep with the target object placed along the plane +x axis.
   */
  inline DensityReport density_sweep(const MeshGeometryConfig& config,
                                     const CameraPose& pose,
                                     const LensModel& lens,
                                     std::span<const double> distances) {
    if (distances.empty()) {
      throw std::invalid_argument("density_sweep: needs at least one distance");
    }
    for (std::size_t i = 1; i < distances.size(); ++i) {
      if (!(distances[i] > distances[i - 1])) {
        throw std::invalid_argument("density_sweep: distances must be strictly increasing");
      }
    }

    // the mesh under inspection
    const VisualMesh mesh = build_mesh(config);

    // calibrate the hex lattice to the same visible point budget
    std::uint64_t visible = 0;
    vec2<double> pixel{};
    for (const MeshNode& node : mesh.nodes) {
      visible += detail::pixel_from_direction(node.direction, pose, lens, pixel) ? 1 : 0;
    }
    const HexGrid hex = hexagonal_grid(lens, solve_hex_spacing(lens, visible));

    std::vector<vec3<double>> hex_rays;
    hex_rays.reserve(hex.points.size());
    vec3<double> ray{};
    for (const auto& point : hex.points) {
      if (detail::direction_from_pixel(point, pose, lens, ray)) {
        hex_rays.push_back(ray);
      }
    }

    DensityReport report;
    report.rows.reserve(distances.size());
    for (double distance : distances) {
      DensityRow row;
      row.ground_distance = distance;
      row.mesh_point_count = count_nodes_in_object(mesh, pose, lens, {{distance, 0.0}}, config.shape.radius);
      row.ring_intersection_count = count_ring_intersections(config, distance);
      for (const vec3<double>& hex_ray : hex_rays) {
        row.hex_point_count +=
          detail::ray_hits_object(hex_ray, config.shape, {{distance, 0.0}}, pose.height) ? 1 : 0;
      }
      report.rows.push_back(row);
    }
    return report;
  }

}  // namespace oracle
}  // namespace visualmesh

#endif  // VISUALMESH_ORACLE_HPP
