#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "s2s1/errors.hpp"

namespace s2s1 {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Chart validity gate on s(e3, v) and on 1 + e3'v at the excluded pole.
inline constexpr double kPoleEps = 1e-9;
// Aligned/antipodal branch gate on s(vbar, v) for the transport and the
// piecewise tilt laws, whose exact-equality branches are measure zero.
inline constexpr double kAlignEps = 1e-8;

/// Skew matrix of z, so that hat(z) * y == z x y.
inline Mat3 hat(const Vec3& z) {
  Mat3 m;
  m << 0.0, -z.z(), z.y(),
       z.z(), 0.0, -z.x(),
      -z.y(), z.x(), 0.0;
  return m;
}

/// Inverse of hat. Throws NotSkew unless m is antisymmetric.
inline Vec3 vee(const Mat3& m) {
  if ((m + m.transpose()).norm() > 1e-9) {
    throw NotSkew("vee: matrix is not antisymmetric");
  }
  return Vec3(m(2, 1), m(0, 2), m(1, 0));
}

/// vee of the antisymmetric part, for extracting frame rates from R' * Rdot.
inline Vec3 vee_skew_part(const Mat3& m) {
  const Mat3 a = 0.5 * (m - m.transpose());
  return Vec3(a(2, 1), a(0, 2), a(1, 0));
}

/// s(a, b) = sqrt(1 - (a'b)^2), the sine of the angle between unit vectors.
/// The radicand is clamped at zero; roundoff can push (a'b)^2 past 1.
inline double s_helper(const Vec3& a, const Vec3& b) {
  const double c = a.dot(b);
  return std::sqrt(std::max(0.0, 1.0 - c * c));
}

/// Orthogonal projection of z onto the tangent space of the sphere at v.
inline Vec3 project_tangent(const Vec3& v, const Vec3& z) {
  return z - v * v.dot(z);
}

/// Rodrigues exponential. Series branch below 1e-6 avoids 0/0 at the origin.
inline Mat3 exp_so3(const Vec3& z) {
  const double t2 = z.squaredNorm();
  const double t = std::sqrt(t2);
  double a;  // sin(t)/t
  double b;  // (1 - cos(t))/t^2
  if (t < 1e-6) {
    a = 1.0 - t2 / 6.0;
    b = 0.5 - t2 / 24.0;
  } else {
    a = std::sin(t) / t;
    b = (1.0 - std::cos(t)) / t2;
  }
  const Mat3 s = hat(z);
  return Mat3::Identity() + a * s + b * (s * s);
}

/// Rotation about e3 represented by a point of the unit circle,
/// [[w1, -w2, 0], [w2, w1, 0], [0, 0, 1]].
inline Mat3 rot_z(const Vec2& w) {
  Mat3 m;
  m << w.x(), -w.y(), 0.0,
       w.y(), w.x(), 0.0,
       0.0, 0.0, 1.0;
  return m;
}

/// Rotation about e3 by an angle.
inline Mat3 rot_z(double angle) {
  return rot_z(Vec2(std::cos(angle), std::sin(angle)));
}

/// Nearest rotation (polar factor) via Newton iterations x <- (x + x^-T)/2.
/// Three iterations reach machine precision from drift of order 1e-3; the
/// top-up loop covers inputs near the 0.1 edge of the contract.
inline Mat3 reorthonormalize(const Mat3& r) {
  if (r.determinant() <= 0.0) {
    throw DegenerateRotation("reorthonormalize: determinant is not positive");
  }
  Mat3 x = r;
  for (int i = 0; i < 3; ++i) {
    x = 0.5 * (x + x.inverse().transpose().eval());
  }
  for (int i = 0; i < 5; ++i) {
    if ((x.transpose() * x - Mat3::Identity()).norm() <= 1e-13) break;
    x = 0.5 * (x + x.inverse().transpose().eval());
  }
  return x;
}

struct UnitQuaternion {
  double eta = 1.0;  // scalar part
  Vec3 eps = Vec3::Zero();
};

/// Shepperd-style extraction: branch on the largest of trace and diagonal
/// entries so the divisor stays away from zero.
inline UnitQuaternion quat_from_rotation(const Mat3& r) {
  const double tr = r.trace();
  UnitQuaternion q;
  if (tr >= r(0, 0) && tr >= r(1, 1) && tr >= r(2, 2)) {
    const double s = std::sqrt(1.0 + tr) * 2.0;
    q.eta = 0.25 * s;
    q.eps = Vec3(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1)) / s;
  } else if (r(0, 0) >= r(1, 1) && r(0, 0) >= r(2, 2)) {
    const double s = std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2)) * 2.0;
    q.eta = (r(2, 1) - r(1, 2)) / s;
    q.eps = Vec3(0.25 * s, (r(0, 1) + r(1, 0)) / s, (r(0, 2) + r(2, 0)) / s);
  } else if (r(1, 1) >= r(2, 2)) {
    const double s = std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2)) * 2.0;
    q.eta = (r(0, 2) - r(2, 0)) / s;
    q.eps = Vec3((r(0, 1) + r(1, 0)) / s, 0.25 * s, (r(1, 2) + r(2, 1)) / s);
  } else {
    const double s = std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1)) * 2.0;
    q.eta = (r(1, 0) - r(0, 1)) / s;
    q.eps = Vec3((r(0, 2) + r(2, 0)) / s, (r(1, 2) + r(2, 1)) / s, 0.25 * s);
  }
  const double n = std::sqrt(q.eta * q.eta + q.eps.squaredNorm());
  q.eta /= n;
  q.eps /= n;
  return q;
}

inline Mat3 rotation_from_quat(const UnitQuaternion& q) {
  const Mat3 s = hat(q.eps);
  return Mat3::Identity() + 2.0 * q.eta * s + 2.0 * (s * s);
}

/// Rotation carrying unit vector a to unit vector b about the axis a x b.
/// Smooth and exact through a == b; callers must keep 1 + a'b positive.
inline Mat3 rotation_aligning(const Vec3& a, const Vec3& b) {
  const double c = a.dot(b);
  const Mat3 k = hat(a.cross(b));
  return Mat3::Identity() + k + (k * k) / (1.0 + c);
}

/// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double pi = std::numbers::pi;
  a = std::fmod(a, 2.0 * pi);
  if (a <= -pi) a += 2.0 * pi;
  if (a > pi) a -= 2.0 * pi;
  return a;
}

inline double orthonormality_error(const Mat3& r) {
  return (r.transpose() * r - Mat3::Identity()).norm();
}

inline bool is_rotation(const Mat3& r, double tol = 1e-9) {
  return orthonormality_error(r) <= tol && std::abs(r.determinant() - 1.0) <= tol;
}

}  // namespace s2s1
