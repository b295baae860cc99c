#pragma once

#include <cmath>
#include <memory>

#include "s2s1/attitude_control.hpp"
#include "s2s1/errors.hpp"
#include "s2s1/geometry.hpp"

namespace s2s1 {

// Saturated position tracking per axis, the acceleration-to-attitude map,
// and the flatness-based reference generator.

inline constexpr double kZMarginFrac = 0.05;   // headroom below g on the z axis
inline constexpr double kSatEpsFrac = 0.05;    // default smoothing width, fraction of (b - a)
inline constexpr double kThrustFloor = 1e-9;   // below this the thrust direction is undefined

struct SaturationSpec {
  double a;    // lower limit
  double b;    // upper limit
  double eps;  // smoothing half-width, in [0, (b - a)/2]
};

/// Continuously differentiable saturation: identity well inside the limits,
/// hard at the limits, quadratic blends of width 2*eps at each end.
inline double sat_eps(double x, const SaturationSpec& spec) {
  const double a = spec.a;
  const double b = spec.b;
  const double eps = spec.eps;
  if (!(a < b) || eps < 0.0 || eps > 0.5 * (b - a)) {
    throw Error("sat_eps: invalid saturation spec");
  }
  if (eps == 0.0) {
    return std::min(b, std::max(a, x));
  }
  if (x <= a - eps) return a;
  if (x >= b + eps) return b;
  if (x <= a + eps) {
    const double d = x - (a + eps);
    return x + d * d / (4.0 * eps);
  }
  if (x >= b - eps) {
    const double d = x - (b - eps);
    return x - d * d / (4.0 * eps);
  }
  return x;
}

struct OuterGains {
  double kp = 1.0;  // [1/s^2]
  double kv = 2.0;  // [1/s]
};

enum class Axis { kX, kY, kZ };

struct AxisLimits {
  double lo;
  double hi;
};

/// Per-axis acceleration limits from the box inscribed in the thrust ball.
/// The z upper limit is clamped below g so the commanded thrust direction
/// keeps a positive vertical component.
inline AxisLimits axis_limits(double thrust_max, double m, double g, Axis axis) {
  const double r = thrust_max / (m * std::sqrt(3.0));
  AxisLimits lim;
  if (axis == Axis::kZ) {
    lim.lo = g - r;
    lim.hi = std::min(g + r, g - kZMarginFrac * g);
  } else {
    lim.lo = -r;
    lim.hi = r;
  }
  if (!(lim.lo < lim.hi)) {
    throw InfeasibleBox("axis_limits: empty acceleration interval");
  }
  return lim;
}

/// Saturated PD tracking law for one double-integrator axis. The reference
/// acceleration must lie strictly inside the limits.
inline double pd_accel(double e1, double e2, double ubar, const OuterGains& gains,
                       const SaturationSpec& spec) {
  if (!(spec.a < ubar && ubar < spec.b)) {
    throw ReferenceInfeasible("pd_accel: reference acceleration outside the open limits");
  }
  return sat_eps(ubar + gains.kp * e1 + gains.kv * e2, spec);
}

/// Algebraically equivalent form with the saturation shifted around the
/// reference; kept for the equivalence check.
inline double pd_accel_shifted(double e1, double e2, double ubar, const OuterGains& gains,
                               const SaturationSpec& spec) {
  if (!(spec.a < ubar && ubar < spec.b)) {
    throw ReferenceInfeasible("pd_accel_shifted: reference acceleration outside the open limits");
  }
  const SaturationSpec shifted{spec.a - ubar, spec.b - ubar, spec.eps};
  return ubar + sat_eps(gains.kp * e1 + gains.kv * e2, shifted);
}

struct AccelCommand {
  Vec3 a_ref;
  double T;   // total thrust [N]
  Mat3 Rbar;  // commanded attitude
};

/// Thrust magnitude and attitude realizing a desired acceleration with a
/// given yaw angle. The first body axis is placed so its horizontal
/// projection points along yaw.
inline AccelCommand accel_to_attitude(const Vec3& a_ref, double psibar, double m, double g) {
  const Vec3 abar = Vec3(0.0, 0.0, g) - a_ref;
  const double n = abar.norm();
  if (n <= kThrustFloor) {
    throw DegenerateThrust("accel_to_attitude: zero thrust command");
  }
  AccelCommand cmd;
  cmd.a_ref = a_ref;
  cmd.T = m * n;
  const Vec3 r3 = abar / n;
  const Vec3 rp(-std::sin(psibar), std::cos(psibar), 0.0);
  const double s = s_helper(rp, r3);
  if (s < 1e-9) {
    throw TiltRestrictionViolated("accel_to_attitude: thrust direction parallel to the yaw normal");
  }
  const Vec3 r1 = rp.cross(r3) / s;
  cmd.Rbar.col(0) = r1;
  cmd.Rbar.col(1) = r3.cross(r1);
  cmd.Rbar.col(2) = r3;
  return cmd;
}

/// Position path and yaw angle with the analytic derivatives the flatness
/// map needs: three of position, one of yaw.
struct FlatSample {
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Vec3 a = Vec3::Zero();
  Vec3 j = Vec3::Zero();
  double psi = 0.0;
  double psi_dot = 0.0;
};

class FlatReference {
 public:
  virtual ~FlatReference() = default;
  virtual FlatSample at(double t) const = 0;
};

class SetpointReference final : public FlatReference {
 public:
  SetpointReference(const Vec3& p, double psi) : p_(p), psi_(psi) {}
  FlatSample at(double) const override {
    FlatSample s;
    s.p = p_;
    s.psi = psi_;
    return s;
  }

 private:
  Vec3 p_;
  double psi_;
};

/// Horizontal circle at constant angular rate and constant yaw.
class CircleReference final : public FlatReference {
 public:
  CircleReference(const Vec3& center, double radius, double rate, double psi)
      : center_(center), radius_(radius), rate_(rate), psi_(psi) {}
  FlatSample at(double t) const override {
    const double c = std::cos(rate_ * t);
    const double s = std::sin(rate_ * t);
    FlatSample out;
    out.p = center_ + radius_ * Vec3(c, s, 0.0);
    out.v = radius_ * rate_ * Vec3(-s, c, 0.0);
    out.a = radius_ * rate_ * rate_ * Vec3(-c, -s, 0.0);
    out.j = radius_ * rate_ * rate_ * rate_ * Vec3(s, -c, 0.0);
    out.psi = psi_;
    return out;
  }

 private:
  Vec3 center_;
  double radius_;
  double rate_;
  double psi_;
};

/// Fixed position with a linearly ramping yaw angle.
class YawRampReference final : public FlatReference {
 public:
  YawRampReference(const Vec3& p, double psi0, double rate) : p_(p), psi0_(psi0), rate_(rate) {}
  FlatSample at(double t) const override {
    FlatSample s;
    s.p = p_;
    s.psi = psi0_ + rate_ * t;
    s.psi_dot = rate_;
    return s;
  }

 private:
  Vec3 p_;
  double psi0_;
  double rate_;
};

struct ReferenceState {
  AttitudeReference att;
  Vec3 pbar;
  Vec3 vbar;
  double Tbar;
};

/// Flatness map: position path and yaw to the full attitude reference with
/// consistent rates. Restricted to trajectories whose thrust direction stays
/// above the horizon, where the yaw parameterization is well defined.
inline ReferenceState reference_from_flat(const FlatReference& flat, double t, double m, double g) {
  const FlatSample f = flat.at(t);
  const Vec3 b = Vec3(0.0, 0.0, g) - f.a;
  const double nb = b.norm();
  if (nb <= kThrustFloor) {
    throw DegenerateThrust("reference_from_flat: zero reference thrust");
  }
  const Vec3 r3 = b / nb;
  if (r3.z() <= 0.0) {
    throw TiltRestrictionViolated("reference_from_flat: reference thrust below the horizon");
  }
  const Vec3 b_dot = -f.j;
  const Vec3 r3_dot = project_tangent(r3, b_dot) / nb;

  const Vec3 rp(-std::sin(f.psi), std::cos(f.psi), 0.0);
  const Vec3 rp_dot = -f.psi_dot * Vec3(std::cos(f.psi), std::sin(f.psi), 0.0);
  const Vec3 q = rp.cross(r3);
  const double s = q.norm();
  if (s < 1e-9) {
    throw TiltRestrictionViolated("reference_from_flat: thrust direction parallel to the yaw normal");
  }
  const Vec3 q_dot = rp_dot.cross(r3) + rp.cross(r3_dot);
  const double s_dot = q.dot(q_dot) / s;
  const Vec3 r1 = q / s;
  const Vec3 r1_dot = q_dot / s - q * (s_dot / (s * s));
  const Vec3 r2 = r3.cross(r1);

  Mat3 Rbar;
  Rbar.col(0) = r1;
  Rbar.col(1) = r2;
  Rbar.col(2) = r3;
  Vec3 omegabar(-r2.dot(r3_dot), r1.dot(r3_dot), r2.dot(r1_dot));

  ReferenceState out;
  out.att = attitude_reference_from_rates(Rbar, omegabar);
  out.pbar = f.p;
  out.vbar = f.v;
  out.Tbar = m * nb;
  return out;
}

}  // namespace s2s1
