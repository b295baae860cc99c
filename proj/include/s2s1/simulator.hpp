#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "s2s1/attitude_control.hpp"
#include "s2s1/errors.hpp"
#include "s2s1/geometry.hpp"
#include "s2s1/outer_loop.hpp"
#include "s2s1/sampling.hpp"

namespace s2s1 {

// Deterministic fixed-step closed-loop simulation of the kinematic quadrotor
// model under a selected attitude controller, with per-step trace records.

struct QuadrotorState {
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Mat3 R = Mat3::Identity();
};

/// One integration step with the inputs held over the interval. Translation
/// uses classical RK4 on pdot = v, m vdot = m g e3 - T R e3. The rotation
/// advances by the tilt exponential followed by the yaw rotation about the
/// new body axis; splitting the two keeps the discrete thrust-direction
/// trajectory independent of the yaw channel, which is what the controller
/// guarantees in continuous time.
inline QuadrotorState step(const QuadrotorState& s, const Vec3& omega, double T, double m,
                           double g, double dt) {
  const Vec3 a = Vec3(0.0, 0.0, g) - (T / m) * s.R.col(2);

  // RK4 stages for (p, v) with constant acceleration.
  const Vec3 k1p = s.v, k1v = a;
  const Vec3 k2p = s.v + 0.5 * dt * k1v, k2v = a;
  const Vec3 k3p = s.v + 0.5 * dt * k2v, k3v = a;
  const Vec3 k4p = s.v + dt * k3v, k4v = a;

  QuadrotorState out;
  out.p = s.p + (dt / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
  out.v = s.v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  out.R = reorthonormalize(s.R * exp_so3(Vec3(omega.x(), omega.y(), 0.0) * dt) *
                           rot_z(omega.z() * dt));
  return out;
}

/// Yaw angle: direction of the horizontal projection of the first body axis.
inline double yaw_angle(const Mat3& R) {
  const double x = R(0, 0);
  const double y = R(1, 0);
  if (std::sqrt(x * x + y * y) <= 1e-9) {
    throw YawUndefined("yaw_angle: first body axis is vertical");
  }
  return std::atan2(y, x);
}

enum class Controller { kS2S1, kSo3Continuous, kQuaternionDiscontinuous };

inline std::string controller_name(Controller c) {
  switch (c) {
    case Controller::kS2S1: return "s2s1";
    case Controller::kSo3Continuous: return "so3_continuous";
    case Controller::kQuaternionDiscontinuous: return "quaternion_discontinuous";
  }
  return "unknown";
}

struct ScenarioConfig {
  double m = 1.0;       // [kg]
  double g = 9.81;      // [m/s^2]
  double dt = 1e-3;     // [s]
  double t_final = 10.0;
  Controller controller = Controller::kS2S1;
  InnerGains inner;
  OuterGains outer;
  BaselineGains baseline;
  double thrust_max = 20.0;           // [N]
  double sat_eps_frac = kSatEpsFrac;  // smoothing width as a fraction of each box
  Vec3 p0 = Vec3::Zero();
  Vec3 v0 = Vec3::Zero();
  double psi0 = 0.0;
  Vec3 tilt_axis = Vec3::UnitX();
  double tilt_angle = 0.0;
  bool random_tilt = false;  // draw the initial tilt from the seeded generator
  std::shared_ptr<const FlatReference> reference =
      std::make_shared<SetpointReference>(Vec3::Zero(), 0.0);
  std::uint64_t seed = 0;
};

inline void validate(const ScenarioConfig& cfg) {
  if (!(cfg.dt > 0.0) || !(cfg.t_final >= cfg.dt)) {
    throw ConfigParse("scenario: need dt > 0 and t_final >= dt");
  }
  if (!(cfg.m > 0.0) || !(cfg.thrust_max > 0.0)) {
    throw ConfigParse("scenario: mass and max thrust must be positive");
  }
  if (!(cfg.inner.k1 > 0.0) || !(cfg.inner.k2 > 0.0) || !(cfg.outer.kp > 0.0) ||
      !(cfg.outer.kv > 0.0) || !(cfg.baseline.kq > 0.0)) {
    throw ConfigParse("scenario: gains must be positive");
  }
  if (!(cfg.baseline.k(0) > 0.0 && cfg.baseline.k(0) < cfg.baseline.k(1) &&
        cfg.baseline.k(1) < cfg.baseline.k(2))) {
    throw ConfigParse("scenario: baseline k must be positive and increasing");
  }
  if ((cfg.baseline.K - cfg.baseline.K.transpose()).norm() > 1e-9 ||
      Eigen::LLT<Mat3>(cfg.baseline.K).info() != Eigen::Success) {
    throw ConfigParse("scenario: baseline K must be symmetric positive definite");
  }
  if (!cfg.reference) {
    throw ConfigParse("scenario: missing reference");
  }
}

struct TraceRecord {
  double t;
  Vec3 p;
  Vec3 v;
  Mat3 R;
  double psi;
  double T;
  Vec3 omega;
  double w1, w2;
  double xi;       // r3bar' r3
  double V_w;      // 2 (1 - w1)
  double pos_err;  // || pbar - p ||
};

struct MetricsSummary {
  double max_abs_y = 0.0;
  double max_pos_err = 0.0;
  double settle_time_x = 0.0;
  double final_yaw_err = 0.0;
  long vw_violations = 0;
  double max_ortho_drift = 0.0;
};

/// Reference context for the trace-only metrics; the trace stores the state
/// but not the reference path.
struct MetricsRef {
  Vec3 pbar_final = Vec3::Zero();
  double psibar_final = 0.0;
  double x_step_size = 1.0;  // magnitude of the setpoint step in x
};

inline MetricsSummary compute_metrics(const std::vector<TraceRecord>& trace,
                                      const MetricsRef& ref) {
  if (trace.empty()) {
    throw EmptyTrace("compute_metrics: empty trace");
  }
  MetricsSummary m;
  const double settle_band = 0.02 * std::abs(ref.x_step_size);
  double prev_vw = trace.front().V_w;
  for (const TraceRecord& r : trace) {
    m.max_abs_y = std::max(m.max_abs_y, std::abs(r.p.y() - ref.pbar_final.y()));
    m.max_pos_err = std::max(m.max_pos_err, r.pos_err);
    if (std::abs(r.p.x() - ref.pbar_final.x()) > settle_band) {
      m.settle_time_x = r.t;
    }
    if (r.V_w > prev_vw + 1e-12) {
      ++m.vw_violations;
    }
    prev_vw = r.V_w;
    m.max_ortho_drift = std::max(m.max_ortho_drift, orthonormality_error(r.R));
  }
  m.final_yaw_err = std::abs(wrap_angle(trace.back().psi - ref.psibar_final));
  return m;
}

struct RunResult {
  std::vector<TraceRecord> trace;
  MetricsSummary metrics;
};

/// Closed-loop run: saturated PD outer loop, acceleration-to-attitude map,
/// and the selected inner-loop controller, stepped at fixed dt. The inner
/// reference is rebuilt online each step; its rates come from one-step
/// backward differences of the commanded frame.
inline RunResult run_scenario(const ScenarioConfig& cfg) {
  validate(cfg);

  QuadrotorState state;
  state.p = cfg.p0;
  state.v = cfg.v0;
  double tilt_angle = cfg.tilt_angle;
  Vec3 tilt_axis = cfg.tilt_axis;
  if (cfg.random_tilt) {
    Rng rng(cfg.seed);
    tilt_axis = random_tangent(rng, Vec3::UnitZ());
    std::uniform_real_distribution<double> ang(0.0, 1.0);
    tilt_angle = ang(rng);
  }
  const double axis_norm = tilt_axis.norm();
  if (axis_norm < 1e-12) {
    throw ConfigParse("scenario: zero tilt axis");
  }
  state.R = rot_z(cfg.psi0) * exp_so3(tilt_angle * tilt_axis / axis_norm);

  const AxisLimits lim[3] = {axis_limits(cfg.thrust_max, cfg.m, cfg.g, Axis::kX),
                             axis_limits(cfg.thrust_max, cfg.m, cfg.g, Axis::kY),
                             axis_limits(cfg.thrust_max, cfg.m, cfg.g, Axis::kZ)};
  SaturationSpec sat[3];
  for (int i = 0; i < 3; ++i) {
    sat[i] = {lim[i].lo, lim[i].hi, cfg.sat_eps_frac * (lim[i].hi - lim[i].lo)};
  }

  const long n_steps = static_cast<long>(std::ceil(cfg.t_final / cfg.dt));
  RunResult out;
  out.trace.reserve(n_steps);

  Mat3 prev_Rbar;
  bool have_prev = false;
  FlatSample flat_final;

  for (long i = 0; i < n_steps; ++i) {
    const double t = static_cast<double>(i) * cfg.dt;
    const FlatSample flat = cfg.reference->at(t);
    flat_final = flat;

    try {
      Vec3 a_ref;
      for (int ax = 0; ax < 3; ++ax) {
        a_ref(ax) = pd_accel(flat.p(ax) - state.p(ax), flat.v(ax) - state.v(ax), flat.a(ax),
                             cfg.outer, sat[ax]);
      }
      const AccelCommand cmd = accel_to_attitude(a_ref, flat.psi, cfg.m, cfg.g);

      Vec3 dr3 = Vec3::Zero();
      Vec3 dr1 = Vec3::Zero();
      if (have_prev) {
        dr3 = (cmd.Rbar.col(2) - prev_Rbar.col(2)) / cfg.dt;
        dr1 = (cmd.Rbar.col(0) - prev_Rbar.col(0)) / cfg.dt;
      }
      const AttitudeReference ref = attitude_reference_from_differences(cmd.Rbar, dr3, dr1);
      prev_Rbar = cmd.Rbar;
      have_prev = true;

      Vec3 omega;
      switch (cfg.controller) {
        case Controller::kS2S1:
          omega = attitude_rate_s2s1(state.R, ref, cfg.inner);
          break;
        case Controller::kSo3Continuous:
          omega = attitude_rate_so3(state.R, ref, cfg.baseline);
          break;
        case Controller::kQuaternionDiscontinuous:
          omega = attitude_rate_quaternion(state.R, ref, cfg.baseline.kq);
          break;
      }

      TraceRecord rec;
      rec.t = t;
      rec.p = state.p;
      rec.v = state.v;
      rec.R = state.R;
      rec.psi = yaw_angle(state.R);
      rec.T = cmd.T;
      rec.omega = omega;
      const Vec2 w = yaw_error(state.R, ref);
      rec.w1 = w.x();
      rec.w2 = w.y();
      rec.xi = ref.Rbar.col(2).dot(state.R.col(2));
      rec.V_w = 2.0 * (1.0 - w.x());
      rec.pos_err = (flat.p - state.p).norm();
      out.trace.push_back(rec);

      state = step(state, omega, cmd.T, cfg.m, cfg.g, cfg.dt);
    } catch (const Error& e) {
      throw SimulationError(t, e.what());
    }
  }

  MetricsRef mref;
  mref.pbar_final = flat_final.p;
  mref.psibar_final = flat_final.psi;
  const double x_step = std::abs(flat_final.p.x() - cfg.p0.x());
  mref.x_step_size = (x_step > 1e-12) ? x_step : 1.0;
  out.metrics = compute_metrics(out.trace, mref);
  return out;
}

}  // namespace s2s1
