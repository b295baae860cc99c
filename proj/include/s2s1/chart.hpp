#pragma once

#include "s2s1/errors.hpp"
#include "s2s1/geometry.hpp"

namespace s2s1 {

// Coordinates on (S^2 \ {-e3}) x S^1 for a rotation outside the cut set of
// attitudes whose third column is -e3. v is the third column; w fixes the
// angle about it, measured against the frame obtained by parallel transport
// of e1, e2 from e3 to v along the geodesic.

struct ChartPoint {
  Vec3 v = Vec3::UnitZ();
  Vec2 w = Vec2(1.0, 0.0);
};

struct TangentBasisAtE3 {
  Vec3 a2_perp;  // tangent at both e3 and v, along the geodesic normal
  Vec3 b1_perp;  // tangent at e3, within the geodesic plane
  double d1;     // e1' b1_perp
  double d2;     // e1' a2_perp
};

struct ChartBasis {
  Vec3 a1_perp;  // tangent at v, within the geodesic plane
  TangentBasisAtE3 at_e3;
};

/// Auxiliary tangent frames at v and at e3 for the chart construction.
/// Undefined at both poles, where the geodesic direction degenerates.
inline ChartBasis chart_basis(const Vec3& v) {
  const Vec3 e3 = Vec3::UnitZ();
  const double s = s_helper(e3, v);
  if (s <= kPoleEps) {
    throw PoleSingularity("chart_basis: v is at a pole");
  }
  ChartBasis b;
  b.a1_perp = -(e3 - v * v.z()) / s;
  b.at_e3.a2_perp = e3.cross(v) / s;
  b.at_e3.b1_perp = -(v - e3 * v.z()) / s;
  b.at_e3.d1 = b.at_e3.b1_perp.x();
  b.at_e3.d2 = b.at_e3.a2_perp.x();
  return b;
}

/// The rotation carrying e3 to v along the geodesic; restricted to tangent
/// spaces it is the parallel transport from e3 to v. Identity at v == e3.
inline Mat3 chart_transport(const Vec3& v) {
  return rotation_aligning(Vec3::UnitZ(), v);
}

/// Embed chart coordinates into a rotation. The third column equals v
/// exactly; at v == e3 the result is the plain z-rotation by w.
inline Mat3 chart_to_rotation(const ChartPoint& p) {
  if (1.0 + p.v.z() <= kPoleEps) {
    throw PoleSingularity("chart_to_rotation: v is the excluded pole -e3");
  }
  return chart_transport(p.v) * rot_z(p.w);
}

/// Invert the chart. Undefined on attitudes whose third column is -e3.
inline ChartPoint chart_from_rotation(const Mat3& r) {
  const Vec3 v = r.col(2);
  if (1.0 + v.z() <= kPoleEps) {
    throw PoleSingularity("chart_from_rotation: attitude is in the cut set");
  }
  const Mat3 t = chart_transport(v);
  Vec2 w(t.col(0).dot(r.col(0)), t.col(1).dot(r.col(0)));
  w.normalize();
  return {v, w};
}

}  // namespace s2s1
