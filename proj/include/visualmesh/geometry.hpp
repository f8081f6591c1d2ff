#ifndef VISUALMESH_GEOMETRY_HPP
#define VISUALMESH_GEOMETRY_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace visualmesh {

/// Target object shapes the mesh can be tuned for.
enum class ShapeKind : std::uint8_t { CIRCLE, SPHERE };

/**
 * @brief The target object the mesh sample density is derived from.
 *
 * Circles describe flat objects lying on the observation plane, spheres describe objects with a
 * roughly equal extent in all dimensions (e.g. a ball resting on the plane).
 */
struct TargetShape {
  ShapeKind kind = ShapeKind::SPHERE;
  /// Object radius in metres, must be positive
  double radius = 0.0;

  bool operator==(const TargetShape&) const = default;
};

/**
 * @brief Everything needed to generate the φ series and the mesh built from it.
 *
 * The sample density k = p/q is the number of φ ring intersections the target object should
 * produce wherever it sits on the observation plane. The series is bounded by the ground distance
 * the caller cares about rather than a fixed ring count.
 */
struct MeshGeometryConfig {
  /// Camera height above the observation plane in metres
  double height = 0.0;
  TargetShape shape{};
  /// Sample density numerator, k = p/q with p >= q >= 1
  std::uint32_t density_p = 4;
  /// Sample density denominator
  std::uint32_t density_q = 1;
  /// Stop generating rings once h·tan(φ) passes this ground distance in metres
  double max_ground_distance = 0.0;

  bool operator==(const MeshGeometryConfig&) const = default;
};

/**
 * @brief The series of ring inclinations generated from a MeshGeometryConfig.
 *
 * angles[0] is always 0 (the point directly below the camera) and every angle is in [0, π/2).
 * effective_radius is the radius after density subdivision: r·q/p for circles, the numerically
 * solved small-sphere radius r₁ for spheres. It is the radius Δθ spacing is computed from.
 */
struct PhiSeries {
  std::vector<double> angles;
  double effective_radius = 0.0;
  /// True when generation stopped because the next angle reached π/2 rather than the distance bound
  bool horizon_limited = false;

  /// Ground distance actually covered by the last ring, in metres
  double ground_coverage(double height) const {
    return angles.empty() ? 0.0 : height * std::tan(angles.back());
  }
};

namespace detail {
  inline void check_phi_domain(double phi, const char* op) {
    if (!(phi >= 0.0) || phi >= 1.5707963267948966) {
      throw std::domain_error(std::string(op) + ": phi must be in [0, pi/2), got " + std::to_string(phi));
    }
  }
}  // namespace detail

/**
 * @brief Next ring inclination for a circle target: the ray advances by one effective diameter
 *        along the observation plane.
 *
 * @param phi                current inclination in [0, π/2) radians
 * @param height             camera height above the plane in metres
 * @param effective_diameter circle diameter after density subdivision (2r/k) in metres
 */
inline double phi_next_circle(double phi, double height, double effective_diameter) {
  detail::check_phi_domain(phi, "phi_next_circle");
  if (!(height > 0.0)) {
    throw std::domain_error("phi_next_circle: height must be positive");
  }
  if (!(effective_diameter > 0.0)) {
    throw std::domain_error("phi_next_circle: effective diameter must be positive");
  }
  return std::atan(std::tan(phi) + effective_diameter / height);
}

/**
 * @brief Next ring inclination for a sphere target, from the tangent construction of the sphere's
 *        shadow cast from the camera point.
 *
 * The result may reach or pass π/2 when the sphere subtends the horizon; callers terminate the
 * series at that point.
 *
 * @param phi    current inclination in [0, π/2) radians
 * @param height camera height above the plane in metres, must exceed the radius
 * @param radius sphere radius in metres
 */
inline double phi_next_sphere(double phi, double height, double radius) {
  detail::check_phi_domain(phi, "phi_next_sphere");
  if (!(radius > 0.0) || !(height > radius)) {
    throw std::domain_error(
      "phi_next_sphere: the visual mesh cannot function when the height of the target objects is greater than or "
      "equal to the height of the camera (radius "
      + std::to_string(radius) + " m, camera height " + std::to_string(height) + " m)");
  }
  return 2.0 * std::atan(radius / (std::cos(phi) * (height - radius)) + std::tan(phi)) - phi;
}

/**
 * @brief Angular spacing of sample points around the ring at inclination phi.
 *
 * Total for all phi >= 0: when the object centre is closer to the point below the camera than its
 * own radius the asin argument passes 1 and the spacing clamps to π. The φ₀ = 0 ring always
 * clamps; the mesh gives that ring a single centre node instead.
 *
 * @param phi              ring inclination in radians
 * @param height           camera height above the plane in metres
 * @param effective_radius subdivided object radius in metres
 */
inline double delta_theta(double phi, double height, double effective_radius) {
  if (!(phi >= 0.0)) {
    throw std::domain_error("delta_theta: phi must be non-negative");
  }
  const double ground = height * std::tan(phi);
  if (!(ground > effective_radius)) {
    return 3.141592653589793238462643383279502884;  // singularity clamp
  }
  return 2.0 * std::asin(effective_radius / ground);
}

namespace detail {
  // Iterate the sphere recursion n times from phi = 0; saturates at pi/2 once the series leaves
  // the valid domain so that bisection on the radius stays monotone.
  inline double iterate_sphere(double radius, double height, std::uint64_t n) {
    constexpr double half_pi = 1.5707963267948966;
    double phi = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
      phi = phi_next_sphere(phi, height, radius);
      if (!(phi < half_pi)) {
        return half_pi;
      }
    }
    return phi;
  }
}  // namespace detail

/**
 * @brief Solve for the reduced sphere radius r₁ that places k = p/q rings across the true object.
 *
 * Finds r₁ ∈ (0, r₀] with f^{pq}(0, r₁) = f^{q}(0, r₀), where f is the sphere recursion. The
 * terminal angle is continuous and strictly increasing in r₁, so plain bisection converges; the
 * match is required to 1e-12 radians.
 */
inline double solve_subdivided_radius(double height, double radius_r0, std::uint32_t p, std::uint32_t q) {
  constexpr double angle_tolerance = 1e-12;
  constexpr int max_iterations = 200;
  constexpr double half_pi = 1.5707963267948966;

  if (!(radius_r0 > 0.0) || !(height > radius_r0)) {
    throw std::domain_error("solve_subdivided_radius: requires height > radius > 0");
  }
  if (q < 1 || p < q) {
    throw std::domain_error("solve_subdivided_radius: density requires p >= q >= 1");
  }
  if (p == q) {
    return radius_r0;  // k = 1, no subdivision
  }

  const double target = detail::iterate_sphere(radius_r0, height, q);
  if (!(target < half_pi)) {
    throw std::domain_error("solve_subdivided_radius: q steps of the target-radius series already reach the horizon");
  }

  const std::uint64_t steps = std::uint64_t(p) * std::uint64_t(q);
  double lo = 0.0;
  double hi = radius_r0;
  double mid = radius_r0;
  for (int i = 0; i < max_iterations; ++i) {
    mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) {
      break;
    }
    if (detail::iterate_sphere(mid, height, steps) < target) {
      lo = mid;
    }
    else {
      hi = mid;
    }
  }

  const double residual = std::abs(detail::iterate_sphere(mid, height, steps) - target);
  if (!(residual < angle_tolerance)) {
    throw std::runtime_error("solve_subdivided_radius: bisection failed to converge (h=" + std::to_string(height)
                             + " r0=" + std::to_string(radius_r0) + " p=" + std::to_string(p) + " q="
                             + std::to_string(q) + " residual=" + std::to_string(residual) + " rad)");
  }
  return mid;
}

namespace detail {
  inline void validate_config(const MeshGeometryConfig& config) {
    if (!(config.shape.radius > 0.0)) {
      throw std::domain_error("mesh geometry: target radius must be positive");
    }
    if (!(config.height > 0.0)) {
      throw std::domain_error("mesh geometry: camera height must be positive");
    }
    if (!(config.max_ground_distance > 0.0)) {
      throw std::domain_error("mesh geometry: max ground distance must be positive");
    }
    if (config.density_q < 1 || config.density_p < config.density_q) {
      throw std::domain_error("mesh geometry: sample density requires p >= q >= 1");
    }
    if (config.shape.kind == ShapeKind::SPHERE && !(config.height > config.shape.radius)) {
      throw std::domain_error(
        "mesh geometry: the visual mesh cannot function when the height of the target objects is greater than or "
        "equal to the height of the camera (sphere radius "
        + std::to_string(config.shape.radius) + " m, camera height " + std::to_string(config.height) + " m)");
    }
  }
}  // namespace detail

/**
 * @brief Generate the full ring inclination series for a configuration.
 *
 * Starts at φ₀ = 0 and applies the shape's recursion with the subdivided effective radius until
 * the next angle would reach π/2 (horizon) or its ground distance would pass the configured bound.
 */
inline PhiSeries build_phi_series(const MeshGeometryConfig& config) {
  constexpr double half_pi = 1.5707963267948966;
  detail::validate_config(config);

  PhiSeries series;
  const double k_inverse = double(config.density_q) / double(config.density_p);
  series.effective_radius = config.shape.kind == ShapeKind::CIRCLE
                              ? config.shape.radius * k_inverse
                              : solve_subdivided_radius(config.height, config.shape.radius, config.density_p,
                                                        config.density_q);

  // Tolerate rounding right at the bound so a ring landing exactly on it is kept.
  const double bound = config.max_ground_distance * (1.0 + 1e-9);

  series.angles.push_back(0.0);
  const double effective_diameter = 2.0 * series.effective_radius;
  for (;;) {
    const double phi = series.angles.back();
    const double next = config.shape.kind == ShapeKind::CIRCLE
                          ? phi_next_circle(phi, config.height, effective_diameter)
                          : phi_next_sphere(phi, config.height, series.effective_radius);
    if (!(next < half_pi)) {
      series.horizon_limited = true;
      break;
    }
    if (config.height * std::tan(next) > bound) {
      break;
    }
    series.angles.push_back(next);
  }
  return series;
}

}  // namespace visualmesh

#endif  // VISUALMESH_GEOMETRY_HPP
