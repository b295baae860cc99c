#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <vector>

#include "s2s1/attitude_control.hpp"
#include "s2s1/chart.hpp"
#include "s2s1/geometry.hpp"
#include "s2s1/sampling.hpp"

namespace s2s1 {

// Self-contained numerical checks of the convergence results and the chart,
// shared by the CLI selftest and the acceptance suite.

/// RK4 with renormalization for the tilt subsystem vdot = (I - vv') u(v)
/// under constant vbar, recording xi = vbar' v at every step.
inline std::vector<double> integrate_tilt_xi(const Vec3& v0, const Vec3& vbar, double k1,
                                             double dt, double t_final) {
  const Vec3 r1_tiebreak = Vec3::UnitX();
  const auto f = [&](const Vec3& v) {
    return project_tangent(v, tilt_feedback(v, vbar, r1_tiebreak, k1));
  };
  Vec3 v = v0;
  std::vector<double> xi;
  const long n = static_cast<long>(std::llround(t_final / dt));
  xi.reserve(n + 1);
  xi.push_back(vbar.dot(v));
  for (long i = 0; i < n; ++i) {
    const Vec3 a = f(v);
    const Vec3 b = f((v + 0.5 * dt * a).normalized());
    const Vec3 c = f((v + 0.5 * dt * b).normalized());
    const Vec3 d = f((v + dt * c).normalized());
    v = (v + (dt / 6.0) * (a + 2.0 * b + 2.0 * c + d)).normalized();
    xi.push_back(vbar.dot(v));
  }
  return xi;
}

/// Closed-form xi(t) for the tilt feedback with constant vbar. The
/// sine branch holds until its switch time, the logistic branch after.
inline double tilt_xi_closed_form(double xi0, double k1, double t) {
  if (xi0 >= 0.0) {
    const double kappa = (1.0 + xi0) / (1.0 - xi0);
    const double e = kappa * std::exp(2.0 * k1 * t);
    return (e - 1.0) / (e + 1.0);
  }
  const double c1 = std::asin(xi0);
  const double ts = -c1 / k1;
  if (t < ts) {
    return std::sin(k1 * t + c1);
  }
  return std::tanh(k1 * (t - ts));
}

struct Theorem1Result {
  double xi0;
  double max_err;
  double tol;
  bool passed() const { return max_err < tol; }
};

inline std::vector<Theorem1Result> theorem1_check(double k1 = 2.5, double dt = 1e-3,
                                                  double horizon = 3.0) {
  const Vec3 vbar = Vec3::UnitZ();
  std::vector<Theorem1Result> results;
  for (double xi0 : {0.0, 0.5, -0.5, -0.99}) {
    const Vec3 v0 = Vec3(std::sqrt(std::max(0.0, 1.0 - xi0 * xi0)), 0.0, xi0);
    const std::vector<double> xi = integrate_tilt_xi(v0, vbar, k1, dt, horizon);
    double max_err = 0.0;
    for (std::size_t i = 0; i < xi.size(); ++i) {
      const double t = static_cast<double>(i) * dt;
      max_err = std::max(max_err, std::abs(xi[i] - tilt_xi_closed_form(xi0, k1, t)));
    }
    results.push_back({xi0, max_err, (xi0 >= 0.0) ? 1e-6 : 1e-5});
  }
  return results;
}

struct Theorem2Result {
  long lyapunov_violations = 0;  // steps with V increasing beyond roundoff
  double max_final_V = 0.0;      // largest V at t = 10 / k2 over all starts
  bool passed() const { return lyapunov_violations == 0 && max_final_V < 1e-6; }
};

/// Integrate the S^1 error subsystem wdot = u_fb(w) (w2, -w1) from random
/// starts (excluding a small ball around the antipode) and check that
/// V = 2 (1 - w1) never increases and has converged by t = 10 / k2.
inline Theorem2Result theorem2_check(std::uint64_t seed = 20240901, int n_starts = 100,
                                     double k2 = 4.0, double dt = 1e-3) {
  Rng rng(seed);
  const auto f = [&](const Vec2& w) {
    const double u = yaw_feedback(w, k2);
    return Vec2(u * w.y(), -u * w.x());
  };
  Theorem2Result out;
  const double t_final = 10.0 / k2;
  const long n = static_cast<long>(std::llround(t_final / dt));
  for (int s = 0; s < n_starts; ++s) {
    Vec2 w = random_unit_vec2(rng);
    while ((w - Vec2(-1.0, 0.0)).norm() <= 1e-6) {
      w = random_unit_vec2(rng);
    }
    double prev_V = 2.0 * (1.0 - w.x());
    for (long i = 0; i < n; ++i) {
      const Vec2 a = f(w);
      const Vec2 b = f((w + 0.5 * dt * a).normalized());
      const Vec2 c = f((w + 0.5 * dt * b).normalized());
      const Vec2 d = f((w + dt * c).normalized());
      w = (w + (dt / 6.0) * (a + 2.0 * b + 2.0 * c + d)).normalized();
      const double V = 2.0 * (1.0 - w.x());
      if (V > prev_V + 1e-12) {
        ++out.lyapunov_violations;
      }
      prev_V = V;
    }
    out.max_final_V = std::max(out.max_final_V, 2.0 * (1.0 - w.x()));
  }
  return out;
}

struct ChartRoundTripResult {
  double max_err_from_rotation = 0.0;  // || phi(phi^-1(R)) - R ||
  double max_err_from_chart = 0.0;     // componentwise, chart -> rotation -> chart
  double seconds = 0.0;
  bool passed() const {
    return max_err_from_rotation < 1e-10 && max_err_from_chart < 1e-10 && seconds < 1.0;
  }
};

inline ChartRoundTripResult chart_roundtrip_check(std::uint64_t seed = 20240902,
                                                  int n_samples = 10000) {
  Rng rng(seed);
  ChartRoundTripResult out;
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < n_samples; ++i) {
    Mat3 r = random_rotation(rng);
    while (1.0 + r(2, 2) <= 1e-3) {
      r = random_rotation(rng);
    }
    const Mat3 back = chart_to_rotation(chart_from_rotation(r));
    out.max_err_from_rotation = std::max(out.max_err_from_rotation, (back - r).norm());
  }
  for (int i = 0; i < n_samples; ++i) {
    Vec3 v = random_unit_vec3(rng);
    while (1.0 + v.z() <= 1e-3) {
      v = random_unit_vec3(rng);
    }
    const ChartPoint p{v, random_unit_vec2(rng)};
    const ChartPoint back = chart_from_rotation(chart_to_rotation(p));
    const double err = std::max((back.v - p.v).lpNorm<Eigen::Infinity>(),
                                (back.w - p.w).lpNorm<Eigen::Infinity>());
    out.max_err_from_chart = std::max(out.max_err_from_chart, err);
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace s2s1
