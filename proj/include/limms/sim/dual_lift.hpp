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

// Dual-arm lift: two mirrored modules carry a box through three keyframes.
// Each joint is a decoupled inertia driven by PID torque against the static
// gravity and payload load, integrated with semi-implicit Euler.

#pragma once

#include <cmath>
#include <string>

#include "limms/config.hpp"
#include "limms/control.hpp"
#include "limms/sim/loads.hpp"
#include "limms/sim/trace.hpp"

namespace limms::sim {

inline constexpr double kRunawaySpeed = 50.0;  // rad/s

inline LiftScene lift_scene(const ScenarioConfig& c) {
  return mirrored_lift_scene(Vec3::Zero(), c.box.size_m, c.lift.anchor_gap_m,
                             c.lift.anchor_height_m, c.lift.lift_height_m,
                             c.lift.place_height_m, c.lift.plan_duration_s);
}

// Box centre in the module's base frame while latched at configuration q.
inline Vec3 latched_box_center(const ModuleParams& p, const JointVector& q,
                               BaseEnd base, double box_size) {
  const Pose end = frame_chain_unchecked(p, q, base).back();
  return end.apply(Vec3(0.0, 0.0, -0.5 * box_size));
}

// Static load torque (gravity of the module plus half the box weight) that
// the joints must supply at q.
inline JointVector lift_load_torques(const ModuleParams& p, const JointVector& q,
                                     BaseEnd base, const Vec3& up, double g,
                                     double box_mass, double box_size) {
  const Pose end = frame_chain_unchecked(p, q, base).back();
  const Vec3 com = end.apply(Vec3(0.0, 0.0, -0.5 * box_size));
  return gravity_torques(p, q, base, up, g) +
         wrench_torques(p, q, base, payload_wrench(end, com, 0.5 * box_mass, up, g));
}

inline SimResult run_dual_lift(const ScenarioConfig& c) {
  validate(c);
  const ModuleParams p = module_params(c);
  const LiftScene scene = lift_scene(c);
  std::array<KeyframePlan, 2> plans = plan_lift_keyframes(scene, p, c.seed);
  if (c.lift.hold_keyframe > 0) {
    for (auto& plan : plans) {
      const JointVector hold = plan.keyframes[c.lift.hold_keyframe - 1].q;
      for (auto& kf : plan.keyframes) kf.q = hold;
    }
  }
  const PidGains gains = pid_gains(c);
  validate(gains);
  const double g = c.gravity_mps2;
  const double dt = c.timestep_s;
  const double share = 0.5 * c.box.mass_kg;
  const long steps = std::lround(c.duration_s / dt);

  SimResult res;
  res.kind = ScenarioKind::kDualLift;
  res.num_modules = 2;
  res.rows.reserve(static_cast<std::size_t>(steps + 1) * 2);

  struct ModuleState {
    BaseEnd base;
    Vec3 up;
    JointVector inertia;
    JointVector q;
    JointVector qd = JointVector::Zero();
    PidState pid;
  };
  std::array<ModuleState, 2> mods;
  for (int m = 0; m < 2; ++m) {
    ModuleState& s = mods[m];
    s.base = plans[m].base;
    s.up = scene.anchors[m].rotation.transpose() * Vec3::UnitZ();
    const JointVector& mid = plans[m].keyframes[1].q;
    s.inertia = effective_inertia(p, mid, s.base,
                                  latched_box_center(p, mid, s.base, c.box.size_m),
                                  share);
    s.q = plans[m].q_at(0.0);
    // Bumpless start: the integrator already carries the static load.
    s.pid.preload(gains, lift_load_torques(p, s.q, s.base, s.up, g, c.box.mass_kg,
                                           c.box.size_m));
  }

  for (long k = 0; k <= steps; ++k) {
    const double t = k * dt;
    for (int m = 0; m < 2; ++m) {
      ModuleState& s = mods[m];
      const JointVector load =
          lift_load_torques(p, s.q, s.base, s.up, g, c.box.mass_kg, c.box.size_m);
      const PidOutput out =
          pid_step(gains, plans[m].q_at(t), s.q, s.qd, dt, s.pid, p.torque_limit);
      s.pid = out.state;
      for (int j = 0; j < kNumJoints; ++j) {
        if (out.saturated[j]) {
          ++res.saturation_count;
          res.log("t=" + format_number(t) + " " + lift_module_name(m) +
                  " joint " + std::to_string(j + 1) + " torque saturated");
        }
      }
      TraceRow row;
      row.t = t;
      row.module = m;
      row.q = s.q;
      row.qd = s.qd;
      row.tau = out.torque;
      res.rows.push_back(row);
      if (k == steps) continue;

      const JointVector qdd = (out.torque - load).cwiseQuotient(s.inertia);
      s.qd += dt * qdd;
      s.q += dt * s.qd;
      for (int j = 0; j < kNumJoints; ++j) {
        if (std::abs(s.qd[j]) > kRunawaySpeed) {
          throw SimAbort("dual_lift: " + std::string(lift_module_name(m)) +
                         " joint " + std::to_string(j + 1) + " speed " +
                         format_number(s.qd[j]) + " rad/s at t=" +
                         format_number(t) + " exceeds the runaway bound");
        }
        // Hard stops at the joint limits.
        const auto& lim = p.joint_limits[j];
        if (s.q[j] < lim.lo || s.q[j] > lim.hi) {
          s.q[j] = std::clamp(s.q[j], lim.lo, lim.hi);
          s.qd[j] = 0.0;
          ++res.limit_count;
          res.log("t=" + format_number(t) + " " + lift_module_name(m) +
                  " joint " + std::to_string(j + 1) + " hit its limit");
        }
      }
    }
  }

  auto& sum = res.summary;
  sum["plan_peak_speed_radps"] = std::max(plans[0].peak_speed(), plans[1].peak_speed());
  for (int m = 0; m < 2; ++m) {
    nlohmann::ordered_json kfs = nlohmann::ordered_json::array();
    for (const auto& kf : plans[m].keyframes) {
      kfs.push_back({{"t_s", kf.time},
                     {"q_rad", std::vector<double>(kf.q.begin(), kf.q.end())}});
    }
    sum[std::string(lift_module_name(m)) + "_keyframes"] = kfs;
  }
  return res;
}

}  // namespace limms::sim
