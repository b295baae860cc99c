#pragma once

#include <cstdint>
#include <random>

#include "s2s1/geometry.hpp"

namespace s2s1 {

using Rng = std::mt19937_64;

inline Vec3 random_unit_vec3(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(n(rng), n(rng), n(rng));
  } while (v.norm() < 1e-6);
  return v.normalized();
}

inline Vec2 random_unit_vec2(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec2 w;
  do {
    w = Vec2(n(rng), n(rng));
  } while (w.norm() < 1e-6);
  return w.normalized();
}

/// Uniform rotation from a normalized quaternion of standard Gaussians.
inline Mat3 random_rotation(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Vector4d q;
  do {
    q = Eigen::Vector4d(n(rng), n(rng), n(rng), n(rng));
  } while (q.norm() < 1e-6);
  q.normalize();
  return rotation_from_quat({q(0), Vec3(q(1), q(2), q(3))});
}

/// Random unit vector in the tangent space of the sphere at v.
inline Vec3 random_tangent(Rng& rng, const Vec3& v) {
  Vec3 t;
  do {
    t = project_tangent(v, random_unit_vec3(rng));
  } while (t.norm() < 1e-6);
  return t.normalized();
}

}  // namespace s2s1
