#ifndef VISUALMESH_UTIL_MATH_HPP
#define VISUALMESH_UTIL_MATH_HPP

#include <array>
#include <cmath>

namespace visualmesh {

template <typename Scalar>
using vec2 = std::array<Scalar, 2>;
template <typename Scalar>
using vec3 = std::array<Scalar, 3>;
template <typename Scalar>
using mat3 = std::array<vec3<Scalar>, 3>;

template <typename Scalar>
constexpr Scalar dot(const vec3<Scalar>& a, const vec3<Scalar>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

template <typename Scalar>
inline Scalar norm(const vec3<Scalar>& a) {
  return std::sqrt(dot(a, a));
}

template <typename Scalar>
inline vec3<Scalar> normalise(const vec3<Scalar>& a) {
  const Scalar inv = Scalar(1) / norm(a);
  return {{a[0] * inv, a[1] * inv, a[2] * inv}};
}

template <typename Scalar>
constexpr vec3<Scalar> cross(const vec3<Scalar>& a, const vec3<Scalar>& b) {
  return {{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]}};
}

template <typename Scalar>
constexpr vec3<Scalar> multiply(const mat3<Scalar>& m, const vec3<Scalar>& v) {
  return {{dot(m[0], v), dot(m[1], v), dot(m[2], v)}};
}

template <typename Scalar>
constexpr mat3<Scalar> multiply(const mat3<Scalar>& a, const mat3<Scalar>& b) {
  mat3<Scalar> out{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c] + a[r][2] * b[2][c];
    }
  }
  return out;
}

template <typename Scalar>
constexpr mat3<Scalar> transpose(const mat3<Scalar>& m) {
  return {{{{m[0][0], m[1][0], m[2][0]}}, {{m[0][1], m[1][1], m[2][1]}}, {{m[0][2], m[1][2], m[2][2]}}}};
}

template <typename Scalar>
constexpr mat3<Scalar> identity_mat3() {
  return {{{{1, 0, 0}}, {{0, 1, 0}}, {{0, 0, 1}}}};
}

}  // namespace visualmesh

#endif  // VISUALMESH_UTIL_MATH_HPP
