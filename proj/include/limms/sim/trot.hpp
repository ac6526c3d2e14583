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

// Quadruped trot: four modules hang from the corners of a box that advances
// kinematically at the commanded speed. Foot targets come from the gait
// schedule, Raibert footsteps and Bezier swings; joints follow by IK. Stance
// legs carry an equal share of the total weight, swing legs only their own.

#pragma once

#include <cmath>
#include <string>

#include "limms/config.hpp"
#include "limms/control.hpp"
#include "limms/ik.hpp"
#include "limms/sim/loads.hpp"
#include "limms/sim/trace.hpp"

namespace limms::sim {

struct QuadrupedGeometry {
  double box_size = 0.3048;
  // Leg posture at the neutral stance; fixes the foot pose relative to the
  // hip and with it the standing height.
  JointVector neutral_q = JointVector::Zero();
  Pose neutral_foot_in_hip;  // fk(neutral_q) from end A

  // +1 for the left side (FL, BL), -1 for the right.
  static double side(int leg) {
    return (leg == kFrontLeft || leg == kBackLeft) ? 1.0 : -1.0;
  }
  static double fore(int leg) {
    return (leg == kFrontLeft || leg == kFrontRight) ? 1.0 : -1.0;
  }

  // Base latch frame of a leg in the body frame (origin at the box centre).
  // The latch z axis points sideways out of the box, x points down. Left and
  // right hips differ by a half turn about the vertical.
  Pose hip(int leg) const {
    const double s = side(leg);
    Pose h;
    h.rotation.col(0) = -Vec3::UnitZ();
    h.rotation.col(1) = -s * Vec3::UnitX();
    h.rotation.col(2) = s * Vec3::UnitY();
    h.translation = Vec3(fore(leg) * 0.5 * box_size, s * 0.5 * box_size, 0.0);
    return h;
  }

  Pose neutral_foot_pose(int leg) const { return hip(leg) * neutral_foot_in_hip; }

  // Height of the hips (and body centre) above the ground.
  double body_height() const { return -neutral_foot_pose(0).translation.z(); }

  // Neutral foot point on the ground, body frame.
  Vec3 neutral_foot(int leg) const { return neutral_foot_pose(leg).translation; }

  // Foot latch orientation, body frame; held through stance and swing.
  Mat3 foot_rotation(int leg) const { return neutral_foot_pose(leg).rotation; }
};

inline QuadrupedGeometry quadruped_geometry(const ScenarioConfig& c,
                                            const ModuleParams& p) {
  QuadrupedGeometry g;
  g.box_size = c.box.size_m;
  g.neutral_q = Eigen::Map<const JointVector>(c.legs.neutral_q_rad.data());
  check_limits(p, g.neutral_q);
  g.neutral_foot_in_hip = fk(p, g.neutral_q, BaseEnd::kEndA);
  // A foot level with the hip (within a micron) gives no standing height.
  if (!(g.body_height() > 1e-6)) {
    throw ConfigError("legs.neutral_q_rad", "neutral foot is not below the hip");
  }
  return g;
}

// Foot placement bookkeeping as a pure function of time: with a kinematic
// body every touchdown target is known in closed form.
struct FootPlanner {
  QuadrupedGeometry geom;
  GaitSchedule gait;

  double body_x(double t) const { return gait.pattern == GaitPattern::kStand ? 0.0 : gait.vel_des * t; }
  double body_v() const { return gait.pattern == GaitPattern::kStand ? 0.0 : gait.vel_des; }

  // Raibert target for a touchdown at time t_td, world frame, ground z = 0.
  Vec3 touchdown_target(int leg, double t_td) const {
    const Vec3 n = geom.neutral_foot(leg);
    const Vec3 hip_ground(n.x() + body_x(t_td), n.y(), 0.0);
    const Vec3 v(body_v(), 0.0, 0.0);
    const Vec3 v_des(gait.pattern == GaitPattern::kStand ? 0.0 : gait.vel_des, 0.0, 0.0);
    return raibert_footstep(hip_ground, v, v_des, gait.stance_s, gait.k_v);
  }

  struct FootState {
    LegPhase phase = LegPhase::kStance;
    Vec3 position;  // world
  };

  FootState foot(int leg, double t) const {
    const GaitSchedule::Phase ph = gait.phase(t, leg);
    FootState f;
    f.phase = ph.phase;
    if (gait.pattern == GaitPattern::kStand) {
      f.position = touchdown_target(leg, 0.0);
    } else if (ph.phase == LegPhase::kStance) {
      f.position = touchdown_target(leg, ph.start);
    } else {
      const Vec3 p0 = touchdown_target(leg, ph.start - gait.stance_s);
      const Vec3 p1 = touchdown_target(leg, ph.start + gait.swing_s);
      f.position = bezier_swing(p0, p1, gait.step_height, ph.progress);
    }
    return f;
  }
};

inline IkSettings tracking_ik_settings(std::uint64_t seed) {
  IkSettings s;
  s.damping = 0.02;
  s.max_iters = 200;
  s.pos_tol = 1e-10;
  s.rot_tol = 1e-10;
  s.restarts = 1;
  s.seed = seed;
  s.stall_window = 50;
  return s;
}

// Vertical load per stance foot from equal sharing of the full weight.
inline double stance_share(const ScenarioConfig& c, const ModuleParams& p,
                           int stance_feet) {
  const double total = (c.box.mass_kg + kNumLegs * p.total_mass) * c.gravity_mps2;
  return stance_feet > 0 ? total / stance_feet : 0.0;
}

inline SimResult run_quadruped_trot(const ScenarioConfig& c) {
  validate(c);
  const ModuleParams p = module_params(c);
  FootPlanner plan{quadruped_geometry(c, p), gait_schedule(c)};
  validate(plan.gait);
  const double dt = c.timestep_s;
  const double g = c.gravity_mps2;
  const long steps = std::lround(c.duration_s / dt);
  const BaseEnd base = BaseEnd::kEndA;

  SimResult res;
  res.kind = ScenarioKind::kQuadrupedTrot;
  res.extras = Extras::kBody;
  res.num_modules = kNumLegs;
  res.rows.reserve(static_cast<std::size_t>(steps + 1) * kNumLegs);

  std::array<JointVector, kNumLegs> q_prev;
  std::array<Vec3, kNumLegs> up;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    up[leg] = plan.geom.hip(leg).rotation.transpose() * Vec3::UnitZ();
  }
  const IkSettings track = tracking_ik_settings(c.seed);
  const IkSettings initial = plan_ik_settings(c.seed);
  double static_fz = 0.0;
  double peak_foot_slip = 0.0;
  std::array<Vec3, kNumLegs> last_stance_pos;
  std::array<bool, kNumLegs> was_stance{};

  for (long k = 0; k <= steps; ++k) {
    const double t = k * dt;
    const Pose body = Pose::from_translation(Vec3(plan.body_x(t), 0.0, plan.geom.body_height()));
    int stance_feet = 0;
    std::array<FootPlanner::FootState, kNumLegs> feet;
    for (int leg = 0; leg < kNumLegs; ++leg) {
      feet[leg] = plan.foot(leg, t);
      if (feet[leg].phase == LegPhase::kStance) ++stance_feet;
    }
    const double fz = stance_share(c, p, stance_feet);
    if (k == 0) static_fz = fz * stance_feet;

    for (int leg = 0; leg < kNumLegs; ++leg) {
      const auto& foot = feet[leg];
      const Pose hip = body * plan.geom.hip(leg);
      Pose foot_world;
      foot_world.rotation = plan.geom.foot_rotation(leg);
      foot_world.translation = foot.position;
      const Pose target = hip.inverse() * foot_world;

      IkResult ik;
      if (k == 0) {
        ik = solve_ik(p, target, base, initial, plan.geom.neutral_q);
      } else {
        ik = solve_ik(p, target, base, track, q_prev[leg]);
      }
      if (!ik.converged) {
        throw SimAbort(std::string("quadruped_trot: IK failure for leg ") +
                       leg_name(leg) + " in " +
                       (foot.phase == LegPhase::kStance ? "stance" : "swing") +
                       " at t=" + format_number(t) + " (position error " +
                       format_number(ik.final_pos_err) + " m)");
      }
      if (!within_limits(p, ik.q)) ++res.limit_count;

      // Pinning check: a stance foot may not move while it stays down.
      if (foot.phase == LegPhase::kStance) {
        if (was_stance[leg]) {
          peak_foot_slip = std::max(
              peak_foot_slip, (foot.position - last_stance_pos[leg]).norm());
        }
        last_stance_pos[leg] = foot.position;
      }
      was_stance[leg] = foot.phase == LegPhase::kStance;

      JointVector tau = gravity_torques(p, ik.q, base, up[leg], g);
      if (foot.phase == LegPhase::kStance) {
        Vec6 w = Vec6::Zero();
        w.head<3>() = fz * up[leg];
        tau += wrench_torques(p, ik.q, base, w);
      }
      for (int j = 0; j < kNumJoints; ++j) {
        if (std::abs(tau[j]) > p.torque_limit) {
          ++res.saturation_count;
          res.log("t=" + format_number(t) + " leg " + leg_name(leg) + " joint " +
                  std::to_string(j + 1) + " torque saturated");
          tau[j] = saturate(tau[j], p.torque_limit);
        }
      }

      TraceRow row;
      row.t = t;
      row.module = leg;
      row.q = ik.q;
      row.qd = k == 0 ? JointVector::Zero() : JointVector((ik.q - q_prev[leg]) / dt);
      row.tau = tau;
      row.body_x = body.translation.x();
      row.body_v = plan.body_v();
      res.rows.push_back(row);
      q_prev[leg] = ik.q;
    }
  }

  const double t_end = steps * dt;
  res.summary["mean_body_speed_mps"] =
      t_end > 0.0 ? (plan.body_x(t_end) - plan.body_x(0.0)) / t_end : 0.0;
  res.summary["initial_vertical_contact_force_n"] = static_fz;
  res.summary["peak_stance_foot_slip_m"] = peak_foot_slip;
  return res;
}

}  // namespace limms::sim
