#pragma once

#include "s2s1/errors.hpp"
#include "s2s1/geometry.hpp"

namespace s2s1 {

// Parallel transport between tangent spaces of S^2 along the connecting
// geodesic, realized as R_r R_e' with the two frames below. Both frames
// share the first column (the geodesic normal); R_e completes it at vbar,
// R_r at v.

struct TransportFrames {
  Mat3 Re;
  Mat3 Rr;
};

/// Sine of the angle between unit vectors as the cross product norm. Same
/// quantity as s_helper but exact near alignment, where sqrt(1 - c^2)
/// cancels catastrophically.
inline double sine_between(const Vec3& a, const Vec3& b) {
  return a.cross(b).norm();
}

inline TransportFrames transport_frames(const Vec3& v, const Vec3& vbar) {
  const Vec3 q = vbar.cross(v);
  const double s = q.norm();
  if (s <= kAlignEps) {
    throw AlignedSingularity("transport_frames: v and vbar are parallel");
  }
  const double c = vbar.dot(v);
  const Vec3 n = q / s;
  TransportFrames f;
  f.Re.col(0) = n;
  f.Re.col(1) = -(v - vbar * c) / s;
  f.Re.col(2) = vbar;
  f.Rr.col(0) = n;
  f.Rr.col(1) = (vbar - v * c) / s;
  f.Rr.col(2) = v;
  return f;
}

/// Transport a tangent vector at vbar to the tangent space at v. Identity in
/// the aligned limit; undefined at antipodal points, where the geodesic is
/// not unique.
inline Vec3 parallel_transport(const Vec3& v, const Vec3& vbar, const Vec3& z) {
  if (sine_between(vbar, v) <= kAlignEps) {
    if (vbar.dot(v) < 0.0) {
      throw AntipodalSingularity("parallel_transport: antipodal points");
    }
    return z;
  }
  const TransportFrames f = transport_frames(v, vbar);
  return f.Rr * (f.Re.transpose() * z);
}

// Analytic rates of the transport frames under given motions of v and vbar,
// obtained by quotient-rule differentiation of the closed-form columns.
// Used by the yaw compensation terms; a finite-difference cross-check lives
// in the test suite.
struct TransportFrameRates {
  TransportFrames frames;
  Mat3 Re_dot;
  Mat3 Rr_dot;
  Vec3 omega_e;  // vee(Re' Re_dot)
  Vec3 omega_r;  // vee(Rr' Rr_dot)
};

inline TransportFrameRates transport_frame_rates(const Vec3& v, const Vec3& vbar,
                                                 const Vec3& v_dot, const Vec3& vbar_dot) {
  const Vec3 q = vbar.cross(v);
  const double s = q.norm();
  if (s <= kAlignEps) {
    throw AlignedSingularity("transport_frame_rates: v and vbar are parallel");
  }
  const double c = vbar.dot(v);
  const double c_dot = vbar_dot.dot(v) + vbar.dot(v_dot);
  const Vec3 q_dot = vbar_dot.cross(v) + vbar.cross(v_dot);
  const double s_dot = q.dot(q_dot) / s;
  const Vec3 n_dot = q_dot / s - q * (s_dot / (s * s));

  TransportFrameRates out;
  out.frames = transport_frames(v, vbar);

  const Vec3 ge = -(v - vbar * c);
  const Vec3 ge_dot = -(v_dot - vbar_dot * c - vbar * c_dot);
  out.Re_dot.col(0) = n_dot;
  out.Re_dot.col(1) = ge_dot / s - ge * (s_dot / (s * s));
  out.Re_dot.col(2) = vbar_dot;

  const Vec3 gr = vbar - v * c;
  const Vec3 gr_dot = vbar_dot - v_dot * c - v * c_dot;
  out.Rr_dot.col(0) = n_dot;
  out.Rr_dot.col(1) = gr_dot / s - gr * (s_dot / (s * s));
  out.Rr_dot.col(2) = v_dot;

  out.omega_e = vee_skew_part(out.frames.Re.transpose() * out.Re_dot);
  out.omega_r = vee_skew_part(out.frames.Rr.transpose() * out.Rr_dot);
  return out;
}

}  // namespace s2s1
