#pragma once

#include <cmath>

#include "s2s1/errors.hpp"
#include "s2s1/geometry.hpp"
#include "s2s1/transport.hpp"

namespace s2s1 {

// Inner-loop attitude tracking with the thrust direction controlled on S^2
// and the angle about it on S^1, plus the two conventional full-attitude
// baselines used for comparison. All laws command the body angular velocity.

/// Attitude reference with the rates needed by the feedforward terms.
/// r3bar_dot and r1bar_dot are kept consistent with Rbar_dot = Rbar S(omegabar).
struct AttitudeReference {
  Mat3 Rbar = Mat3::Identity();
  Vec3 omegabar = Vec3::Zero();
  Vec3 r3bar_dot = Vec3::Zero();
  Vec3 r1bar_dot = Vec3::Zero();
};

inline AttitudeReference static_attitude_reference(const Mat3& Rbar) {
  AttitudeReference ref;
  ref.Rbar = Rbar;
  return ref;
}

/// Reference from a frame and its body angular velocity.
inline AttitudeReference attitude_reference_from_rates(const Mat3& Rbar, const Vec3& omegabar) {
  AttitudeReference ref;
  ref.Rbar = Rbar;
  ref.omegabar = omegabar;
  ref.r3bar_dot = omegabar.y() * Rbar.col(0) - omegabar.x() * Rbar.col(1);
  ref.r1bar_dot = omegabar.z() * Rbar.col(1) - omegabar.y() * Rbar.col(2);
  return ref;
}

/// Reference from raw column-rate estimates (e.g. one-step backward
/// differences). The rates are projected through the angular velocity so the
/// stored derivatives are exactly consistent with the frame.
inline AttitudeReference attitude_reference_from_differences(const Mat3& Rbar,
                                                             const Vec3& r3bar_dot_raw,
                                                             const Vec3& r1bar_dot_raw) {
  Vec3 omegabar;
  omegabar.x() = -Rbar.col(1).dot(r3bar_dot_raw);
  omegabar.y() = Rbar.col(0).dot(r3bar_dot_raw);
  omegabar.z() = Rbar.col(1).dot(r1bar_dot_raw);
  return attitude_reference_from_rates(Rbar, omegabar);
}

struct InnerGains {
  double k1 = 2.5;  // S^2 gain [1/s]
  double k2 = 4.0;  // S^1 gain [1/s]
};

struct BaselineGains {
  Mat3 K = 5.0 * Mat3::Identity();
  Vec3 k = Vec3(0.9, 1.0, 1.1);  // distinct, increasing
  double kq = 5.0;
};

/// S^1 error coordinates: the transported reference first axis expressed in
/// the body tangent frame, w = (r1' t, r2' t) with t the transport of r1bar
/// from r3bar to r3. Equals (1, 0) when the attitudes agree.
inline Vec2 yaw_error(const Mat3& R, const AttitudeReference& ref) {
  const Vec3 v = R.col(2);
  const Vec3 vbar = ref.Rbar.col(2);
  Vec3 t1;
  if (sine_between(vbar, v) <= kAlignEps) {
    if (vbar.dot(v) < 0.0) {
      throw AntipodalSingularity("yaw_error: thrust axes are antipodal");
    }
    t1 = ref.Rbar.col(0);
  } else {
    const TransportFrames f = transport_frames(v, vbar);
    t1 = f.Rr * (f.Re.transpose() * ref.Rbar.col(0));
  }
  Vec2 w(R.col(0).dot(t1), R.col(1).dot(t1));
  w.normalize();
  return w;
}

/// Tilt feedback: pushes v toward vbar along the geodesic with tangent speed
/// k1 where the axes point away from each other and proportional to the
/// remaining sine of the angle once aligned past 90 degrees. r1 breaks the
/// tie at the antipode, where any tangent direction works.
inline Vec3 tilt_feedback(const Vec3& v, const Vec3& vbar, const Vec3& r1, double k1) {
  const double c = v.dot(vbar);
  if (c >= 0.0) {
    return k1 * vbar;
  }
  const double s = sine_between(v, vbar);
  if (s <= kAlignEps) {
    return k1 * r1;
  }
  return (k1 / s) * vbar;
}

/// Tilt feedforward: the reference tangent velocity carried to the tangent
/// space at v, so that pure feedforward keeps the angle between v and vbar
/// constant.
inline Vec3 tilt_feedforward(const Vec3& v, const Vec3& vbar, const Vec3& vbar_dot) {
  const Vec3 n = v.cross(vbar);
  const double s2 = n.squaredNorm();
  if (s2 <= kAlignEps * kAlignEps) {
    return (v.dot(vbar) >= 0.0) ? vbar_dot : -vbar_dot;
  }
  return (n * n.dot(vbar_dot) - project_tangent(v, vbar) * v.dot(vbar_dot)) / s2;
}

/// S^1 feedback: proportional in the half circle containing the goal,
/// constant at full strength in the far half.
inline double yaw_feedback(const Vec2& w, double k2) {
  if (w.x() >= 0.0) return k2 * w.y();
  if (w.y() < 0.0) return -k2;
  return k2;
}

struct YawCompensation {
  double omega_comp = 0.0;  // cancels the transport-frame rotation
  double zeta = 0.0;        // cancels the reference yaw motion
};

/// Compensation terms for the third body-rate component. Both scalars are
/// ratios that are algebraically bounded on S^1; the selector picks the
/// larger of |w1|, |w2| as denominator, which is at least 1/sqrt(2).
inline YawCompensation yaw_compensation(const Mat3& R, const AttitudeReference& ref,
                                        const Vec3& u_v) {
  const Vec3 v = R.col(2);
  const Vec3 vbar = ref.Rbar.col(2);
  const Vec2 w = yaw_error(R, ref);

  const auto select = [&w](double num_over_w1, double num_over_w2) {
    const double denom = (std::abs(w.x()) > std::abs(w.y())) ? w.x() : w.y();
    if (std::abs(denom) < 1.0 / std::sqrt(2.0) - 1e-12) {
      throw NumericalBlowup("yaw_compensation: selector denominator left S^1");
    }
    return (std::abs(w.x()) > std::abs(w.y())) ? num_over_w1 / w.x() : num_over_w2 / w.y();
  };

  YawCompensation out;
  if (sine_between(vbar, v) <= kAlignEps) {
    // Degenerate identity-transport path; the frame compensation vanishes in
    // the aligned limit.
    const double theta1 = -R.col(0).dot(ref.r1bar_dot);
    const double theta2 = R.col(1).dot(ref.r1bar_dot);
    out.zeta = select(theta2, theta1);
    out.omega_comp = 0.0;
    return out;
  }

  const Vec3 v_dot = project_tangent(v, u_v);
  const TransportFrameRates fr = transport_frame_rates(v, vbar, v_dot, ref.r3bar_dot);
  const Mat3 transport = fr.frames.Rr * fr.frames.Re.transpose();
  const Mat3 rate = fr.frames.Rr * hat(fr.omega_r - fr.omega_e) * fr.frames.Re.transpose();

  const Vec3 t1 = transport * ref.Rbar.col(0);
  const double omega1 = -R.col(1).dot(u_v);
  const double omega2 = R.col(0).dot(u_v);

  const double beta1 = omega2 * v.dot(t1) - R.col(0).dot(rate * ref.Rbar.col(0));
  const double beta2 = omega1 * v.dot(t1) + R.col(1).dot(rate * ref.Rbar.col(0));
  const double theta1 = -R.col(0).dot(transport * ref.r1bar_dot);
  const double theta2 = R.col(1).dot(transport * ref.r1bar_dot);

  out.omega_comp = select(beta2, beta1);
  out.zeta = select(theta2, theta1);
  return out;
}

/// The decoupled tracking law: the first two rate components realize the
/// tilt input u_v, the third combines the S^1 feedback with the reference
/// and transport compensations. Undefined when the thrust axes are
/// antipodal (the reference error is in the cut set of the chart).
inline Vec3 attitude_rate_s2s1(const Mat3& R, const AttitudeReference& ref,
                               const InnerGains& gains) {
  const Vec3 v = R.col(2);
  const Vec3 vbar = ref.Rbar.col(2);
  if (sine_between(vbar, v) <= kAlignEps && vbar.dot(v) < 0.0) {
    throw AntipodalSingularity("attitude_rate_s2s1: reference error in the cut set");
  }
  const Vec3 u_v = tilt_feedback(v, vbar, R.col(0), gains.k1) +
                   tilt_feedforward(v, vbar, ref.r3bar_dot);
  const YawCompensation comp = yaw_compensation(R, ref, u_v);
  const double u_w = yaw_feedback(yaw_error(R, ref), gains.k2) + comp.zeta;
  return Vec3(-R.col(1).dot(u_v), R.col(0).dot(u_v), u_w + comp.omega_comp);
}

/// Feedback part of the continuous full-attitude law, K sum_i k_i e_i x
/// (Rtilde' e_i). Vanishes at the identity and at the three 180-degree
/// rotations about the coordinate axes, which are its spurious equilibria.
inline Vec3 baseline_so3_feedback(const Mat3& Rtilde, const BaselineGains& gains) {
  Vec3 sum = Vec3::Zero();
  for (int i = 0; i < 3; ++i) {
    const Vec3 ei = Mat3::Identity().col(i);
    const Vec3 ri = Rtilde.row(i).transpose();  // Rtilde' e_i
    sum += gains.k(i) * ei.cross(ri);
  }
  return gains.K * sum;
}

inline Vec3 attitude_rate_so3(const Mat3& R, const AttitudeReference& ref,
                              const BaselineGains& gains) {
  const Mat3 Rtilde = ref.Rbar.transpose() * R;
  return baseline_so3_feedback(Rtilde, gains) + Rtilde.transpose() * ref.omegabar;
}

/// Feedback part of the discontinuous quaternion law, -kq sgn(eta) eps with
/// sgn(0) taken as +1. Switches across the 180-degree error surface.
inline Vec3 baseline_quaternion_feedback(const Mat3& Rtilde, double kq) {
  const UnitQuaternion q = quat_from_rotation(Rtilde);
  const double sgn = (q.eta >= 0.0) ? 1.0 : -1.0;
  return -kq * sgn * q.eps;
}

inline Vec3 attitude_rate_quaternion(const Mat3& R, const AttitudeReference& ref, double kq) {
  const Mat3 Rtilde = ref.Rbar.transpose() * R;
  return baseline_quaternion_feedback(Rtilde, kq) + Rtilde.transpose() * ref.omegabar;
}

}  // namespace s2s1
