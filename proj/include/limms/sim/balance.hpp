// Copyright 2026 The LIMMS Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Self-balancing mode: the straight module stands on the wheel at end A as a
// planar wheeled inverted pendulum. State (x, xdot, theta, thetadot), theta
// the forward lean from vertical.
//
//   (M + Iw/r^2) xdd + M l cos(th) thdd - M l sin(th) thd^2 = tau / r
//   M l cos(th) xdd + (Ib + M l^2) thdd - M g l sin(th)     = -tau
//
// All module mass rides on the body; the end-A hub lump sits on the axle and
// also sets the wheel's spin inertia as a uniform disc. The wheel is its own
// continuous actuator: the six joints hold zero and report the static torque
// of the tilted column, the wheel torque goes in its own column.

#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "limms/config.hpp"
#include "limms/control.hpp"
#include "limms/sim/loads.hpp"
#include "limms/sim/trace.hpp"

namespace limms::sim {

using BalanceState = Eigen::Vector4d;  // x, xdot, theta, thetadot

inline constexpr double kFallAngle = M_PI / 3.0;
inline constexpr double kWheelLump = 0.5;  // kg, end-A hub lump

struct BalancePlant {
  double mass = 0.0;          // M
  double com_height = 0.0;    // l, axle to COM
  double body_inertia = 0.0;  // Ib, about the COM
  double wheel_radius = 0.05;
  double wheel_inertia = 0.0;
  double gravity = kGravity;

  double a() const { return mass + wheel_inertia / (wheel_radius * wheel_radius); }
  double b() const { return mass * com_height; }
  double c() const { return body_inertia + mass * com_height * com_height; }
};

// Plant from the straight (all joints zero) posture: segment masses along the
// body axis, each segment also carrying its thin-rod inertia.
inline BalancePlant balance_plant(const ModuleParams& p, double g = kGravity) {
  const FrameChain frames = frame_chain_unchecked(p, JointVector::Zero(), BaseEnd::kEndA);
  const auto masses = segment_masses(p, frames, BaseEnd::kEndA);
  BalancePlant plant;
  plant.gravity = g;
  plant.wheel_radius = p.wheel_radius;
  plant.wheel_inertia = 0.5 * kWheelLump * p.wheel_radius * p.wheel_radius;
  double m = 0.0, mz = 0.0;
  for (const PointMass& pm : masses) {
    m += pm.mass;
    mz += pm.mass * pm.position.z();
  }
  plant.mass = m;
  plant.com_height = mz / m;
  double ib = 0.0;
  for (int s = 0; s < kNumSegments; ++s) {
    const double dz = masses[s].position.z() - plant.com_height;
    ib += masses[s].mass * (dz * dz + p.link_lengths[s] * p.link_lengths[s] / 12.0);
  }
  plant.body_inertia = ib;
  return plant;
}

inline BalanceState balance_derivative(const BalancePlant& pl, const BalanceState& s,
                                       double tau) {
  const double th = s[2], thd = s[3];
  const double cs = std::cos(th), sn = std::sin(th);
  const double a = pl.a(), b = pl.b() * cs, c = pl.c();
  const double f1 = tau / pl.wheel_radius + pl.b() * sn * thd * thd;
  const double f2 = pl.b() * pl.gravity * sn - tau;
  const double det = a * c - b * b;
  BalanceState d;
  d[0] = s[1];
  d[1] = (c * f1 - b * f2) / det;
  d[2] = thd;
  d[3] = (a * f2 - b * f1) / det;
  return d;
}

// Classic RK4 with the torque held over the step.
inline BalanceState rk4_step(const BalancePlant& pl, const BalanceState& s,
                             double tau, double dt) {
  const BalanceState k1 = balance_derivative(pl, s, tau);
  const BalanceState k2 = balance_derivative(pl, s + 0.5 * dt * k1, tau);
  const BalanceState k3 = balance_derivative(pl, s + 0.5 * dt * k2, tau);
  const BalanceState k4 = balance_derivative(pl, s + dt * k3, tau);
  return s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Kinetic plus potential energy, potential zero at the axle height.
inline double balance_energy(const BalancePlant& pl, const BalanceState& s) {
  const double xd = s[1], th = s[2], thd = s[3];
  return 0.5 * pl.a() * xd * xd + pl.b() * std::cos(th) * xd * thd +
         0.5 * pl.c() * thd * thd + pl.b() * pl.gravity * std::cos(th);
}

struct LinearBalanceModel {
  Eigen::Matrix4d A = Eigen::Matrix4d::Zero();
  Eigen::Vector4d B = Eigen::Vector4d::Zero();
};

// Small-angle linearization about upright at rest.
inline LinearBalanceModel linearized_balance_model(const ModuleParams& p,
                                                   double g = kGravity) {
  const BalancePlant pl = balance_plant(p, g);
  Eigen::Matrix2d mm;
  mm << pl.a(), pl.b(), pl.b(), pl.c();
  const Eigen::Matrix2d inv = mm.inverse();
  const Eigen::Vector2d grav = inv * Eigen::Vector2d(0.0, pl.b() * g);
  const Eigen::Vector2d input = inv * Eigen::Vector2d(1.0 / pl.wheel_radius, -1.0);
  LinearBalanceModel m;
  m.A(0, 1) = 1.0;
  m.A(1, 2) = grav[0];
  m.A(2, 3) = 1.0;
  m.A(3, 2) = grav[1];
  m.B << 0.0, input[0], 0.0, input[1];
  return m;
}

// Feedback row of the balance law on (x, xdot, theta, thetadot).
inline Eigen::RowVector4d balance_feedback(const BalanceGains& g) {
  return Eigen::RowVector4d(0.0, g.kp_v, g.kp_theta, g.kd_theta);
}

inline Eigen::Matrix4d closed_loop(const LinearBalanceModel& m, const BalanceGains& g) {
  return m.A + m.B * balance_feedback(g);
}

// The law has no position term, so x is a pure integrator of xdot. This is
// the closed loop on (xdot, theta, thetadot), the states it acts on.
inline Eigen::Matrix3d closed_loop_velocity_block(const LinearBalanceModel& m,
                                                  const BalanceGains& g) {
  return closed_loop(m, g).bottomRightCorner<3, 3>();
}

// Holding torques of the straight column tilted by theta about the base y
// axis, physical joint order.
inline JointVector tilted_column_torques(const ModuleParams& p, double theta,
                                         double g) {
  const Vec3 up(-std::sin(theta), 0.0, std::cos(theta));
  return gravity_torques(p, JointVector::Zero(), BaseEnd::kEndA, up, g);
}

inline SimResult run_wheel_balance(const ScenarioConfig& c) {
  validate(c);
  const ModuleParams p = module_params(c);
  const BalanceGains gains = balance_gains(c);
  validate(gains);
  const BalancePlant plant = balance_plant(p, c.gravity_mps2);
  const double dt = c.timestep_s;
  const long steps = std::lround(c.duration_s / dt);

  SimResult res;
  res.kind = ScenarioKind::kWheelBalance;
  res.extras = Extras::kBalance;
  res.num_modules = 1;
  res.rows.reserve(static_cast<std::size_t>(steps + 1));

  BalanceState s(0.0, 0.0, c.balance.theta0_rad, 0.0);
  double settle_time = 0.0;
  bool settled = std::abs(s[2]) < 0.01;
  for (long k = 0; k <= steps; ++k) {
    const double t = k * dt;
    const double raw = gains.kp_theta * s[2] + gains.kd_theta * s[3] +
                       gains.kp_v * (s[1] - c.balance.v_des_mps);
    const double tau = balance_torque(gains, s[2], s[3], s[1], c.balance.v_des_mps,
                                      p.torque_limit);
    if (std::abs(raw) > p.torque_limit) {
      ++res.saturation_count;
      res.log("t=" + format_number(t) + " wheel torque saturated");
    }

    TraceRow row;
    row.t = t;
    row.module = 0;
    row.tau = tilted_column_torques(p, s[2], c.gravity_mps2);
    row.wheel_tau = tau;
    row.body_x = s[0];
    row.body_v = s[1];
    row.theta = s[2];
    row.theta_dot = s[3];
    res.rows.push_back(row);

    if (std::abs(s[2]) >= 0.01) {
      settled = false;
    } else if (!settled) {
      settled = true;
      settle_time = t;
    }
    if (k == steps) break;
    s = rk4_step(plant, s, tau, dt);
    if (std::abs(s[2]) > kFallAngle) {
      throw SimAbort("wheel_balance: fall detected at t=" + format_number(t + dt) +
                     " (theta " + format_number(s[2]) + " rad)");
    }
  }

  res.summary["com_height_m"] = plant.com_height;
  res.summary["body_inertia_kgm2"] = plant.body_inertia;
  res.summary["theta_settle_time_s"] = settled ? settle_time : -1.0;
  res.summary["final_speed_mps"] = s[1];
  res.summary["final_wheel_speed_radps"] = s[1] / p.wheel_radius - s[3];
  return res;
}

}  // namespace limms::sim
