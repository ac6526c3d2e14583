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

// Controllers and trajectory generators: decentralized joint PID, keyframe
// interpolation, trot phase scheduling, Raibert footstep placement, Bezier
// swing curves and the wheeled-balance PD law.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "limms/errors.hpp"
#include "limms/ik.hpp"
#include "limms/kinematics.hpp"

namespace limms {

inline double saturate(double v, double limit) {
  return std::clamp(v, -limit, limit);
}

// ---------------------------------------------------------------------------
// Joint PID

struct PidGains {
  double kp = 60.0;
  double ki = 2.0;
  double kd = 4.0;
  // Bound on the integral contribution ki * integral(e), N m.
  double integral_clamp = 31.0;
};

inline void validate(const PidGains& g) {
  if (g.kp < 0.0 || g.ki < 0.0 || g.kd < 0.0) {
    throw InvalidParams("PID gains must be >= 0");
  }
  if (!(g.integral_clamp > 0.0)) {
    throw InvalidParams("PID integral_clamp must be > 0");
  }
}

struct PidState {
  JointVector integral = JointVector::Zero();  // rad s

  // Sets the integrator so its contribution alone equals `torque`.
  void preload(const PidGains& g, const JointVector& torque) {
    integral = g.ki > 0.0 ? JointVector(torque / g.ki) : JointVector::Zero();
  }
};

struct PidOutput {
  JointVector torque = JointVector::Zero();
  PidState state;
  std::array<bool, kNumJoints> saturated{};
};

// tau = kp (q_des - q) - kd qd + ki integral(e), per joint, integral clamped,
// output saturated to +-torque_limit.
inline PidOutput pid_step(const PidGains& g, const JointVector& q_des,
                          const JointVector& q, const JointVector& qd,
                          double dt, const PidState& state,
                          double torque_limit) {
  if (!(dt > 0.0)) throw InvalidParams("pid_step: dt must be > 0");
  PidOutput out;
  out.state = state;
  for (int j = 0; j < kNumJoints; ++j) {
    const double e = q_des[j] - q[j];
    double integral = state.integral[j] + e * dt;
    if (g.ki > 0.0) {
      const double bound = g.integral_clamp / g.ki;
      integral = std::clamp(integral, -bound, bound);
    }
    out.state.integral[j] = integral;
    const double raw = g.kp * e - g.kd * qd[j] + g.ki * integral;
    out.torque[j] = saturate(raw, torque_limit);
    out.saturated[j] = std::abs(raw) > torque_limit;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Keyframe plans

struct Keyframe {
  double time = 0.0;
  Pose target;  // operational-space target in the module's base frame
  JointVector q = JointVector::Zero();
};

// Piecewise-linear joint-space interpolation between keyframe IK solutions.
struct KeyframePlan {
  BaseEnd base = BaseEnd::kEndA;
  std::vector<Keyframe> keyframes;

  double duration() const {
    return keyframes.empty() ? 0.0 : keyframes.back().time;
  }

  JointVector q_at(double t) const {
    if (t <= keyframes.front().time) return keyframes.front().q;
    for (std::size_t k = 1; k < keyframes.size(); ++k) {
      const Keyframe& a = keyframes[k - 1];
      const Keyframe& b = keyframes[k];
      if (t <= b.time) {
        const double s = (t - a.time) / (b.time - a.time);
        return a.q + s * (b.q - a.q);
      }
    }
    return keyframes.back().q;
  }

  // Segment velocity; zero outside the plan. At a knot the later segment wins.
  JointVector qd_at(double t) const {
    for (std::size_t k = 1; k < keyframes.size(); ++k) {
      const Keyframe& a = keyframes[k - 1];
      const Keyframe& b = keyframes[k];
      if (t >= a.time && t < b.time) return (b.q - a.q) / (b.time - a.time);
    }
    return JointVector::Zero();
  }

  // Largest commanded joint speed over all segments.
  double peak_speed() const {
    double peak = 0.0;
    for (std::size_t k = 1; k < keyframes.size(); ++k) {
      const double dt = keyframes[k].time - keyframes[k - 1].time;
      peak = std::max(peak, (keyframes[k].q - keyframes[k - 1].q)
                                .cwiseAbs().maxCoeff() / dt);
    }
    return peak;
  }
};

inline void validate(const KeyframePlan& plan) {
  if (plan.keyframes.size() < 2) {
    throw InvalidParams("keyframe plan needs at least two keyframes");
  }
  for (std::size_t k = 1; k < plan.keyframes.size(); ++k) {
    if (!(plan.keyframes[k].time > plan.keyframes[k - 1].time)) {
      throw InvalidParams("keyframe timestamps must increase strictly");
    }
  }
}

// ---------------------------------------------------------------------------
// Gait

enum class LegPhase { kStance, kSwing };

// Leg order used everywhere: front-left, front-right, back-left, back-right.
enum Leg : int { kFrontLeft = 0, kFrontRight = 1, kBackLeft = 2, kBackRight = 3 };
inline constexpr int kNumLegs = 4;

inline const char* leg_name(int leg) {
  static constexpr const char* kNames[] = {"FL", "FR", "BL", "BR"};
  return kNames[leg];
}

// Diagonal pair of a leg: {FL, BR} = 0, {FR, BL} = 1.
inline int diagonal_pair(int leg) {
  return (leg == kFrontLeft || leg == kBackRight) ? 0 : 1;
}

enum class GaitPattern { kTrot, kStand };

struct GaitSchedule {
  GaitPattern pattern = GaitPattern::kTrot;
  double stance_s = 0.5;
  double swing_s = 0.5;
  double vel_des = 0.3;
  double step_height = 0.05;
  double k_v = 0.03;

  double period() const { return stance_s + swing_s; }

  struct Phase {
    LegPhase phase = LegPhase::kStance;
    // Progress through the current phase in [0, 1).
    double progress = 0.0;
    // Start time of the current phase.
    double start = 0.0;
  };

  // Pair 0 swings first from t = 0; pair 1 is offset by half a period.
  Phase phase(double t, int leg) const {
    Phase out;
    if (pattern == GaitPattern::kStand) {
      out.progress = 0.0;
      return out;
    }
    const double offset = diagonal_pair(leg) == 0 ? 0.0 : 0.5 * period();
    const double local = t - offset;
    const double cycle = std::floor(local / period());
    const double tau = local - cycle * period();
    const double cycle_start = offset + cycle * period();
    if (tau < swing_s) {
      out.phase = LegPhase::kSwing;
      out.progress = tau / swing_s;
      out.start = cycle_start;
    } else {
      out.phase = LegPhase::kStance;
      out.progress = (tau - swing_s) / stance_s;
      out.start = cycle_start + swing_s;
    }
    return out;
  }
};

inline void validate(const GaitSchedule& g) {
  if (!(g.stance_s > 0.0)) throw InvalidParams("stance_s must be > 0");
  if (!(g.swing_s > 0.0)) throw InvalidParams("swing_s must be > 0");
  if (g.step_height < 0.0) throw InvalidParams("step_height must be >= 0");
  if (g.k_v < 0.0) throw InvalidParams("k_v must be >= 0");
}

// p = p_hip + (stance_s / 2) v + k_v (v - v_des), in the ground plane.
inline Vec3 raibert_footstep(const Vec3& hip_ground, const Vec3& body_vel,
                             const Vec3& vel_des, double stance_s,
                             double k_v) {
  if (!(stance_s > 0.0)) throw InvalidParams("stance_s must be > 0");
  Vec3 p = hip_ground + 0.5 * stance_s * body_vel + k_v * (body_vel - vel_des);
  p.z() = hip_ground.z();
  return p;
}

// Quartic Bezier with control points
//   p0, p0, mid + (0, 0, 8h/3), p1, p1
// which gives exact endpoints, zero velocity at both ends and an apex of
// exactly h above the chord midpoint at u = 1/2.
inline Vec3 bezier_swing(const Vec3& p0, const Vec3& p1, double step_height,
                         double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw InvalidParams("bezier_swing: u outside [0, 1]");
  if (u == 0.0) return p0;
  if (u == 1.0) return p1;
  const Vec3 mid = 0.5 * (p0 + p1) + Vec3(0.0, 0.0, 8.0 * step_height / 3.0);
  const double v = 1.0 - u;
  const double b0 = v * v * v * v;
  const double b1 = 4.0 * u * v * v * v;
  const double b2 = 6.0 * u * u * v * v;
  const double b3 = 4.0 * u * u * u * v;
  const double b4 = u * u * u * u;
  return (b0 + b1) * p0 + b2 * mid + (b3 + b4) * p1;
}

// ---------------------------------------------------------------------------
// Wheeled balance

struct BalanceGains {
  double kp_theta = 0.0;
  double kd_theta = 0.0;
  double kp_v = 0.0;
};

inline void validate(const BalanceGains& g) {
  if (g.kp_theta < 0.0 || g.kd_theta < 0.0 || g.kp_v < 0.0) {
    throw InvalidParams("balance gains must be >= 0");
  }
}

// tau = kp_theta theta + kd_theta theta_dot + kp_v (v - v_des), saturated.
// theta is the forward lean from vertical, positive toward +x.
inline double balance_torque(const BalanceGains& g, double theta,
                             double theta_dot, double v, double v_des,
                             double torque_limit) {
  return saturate(g.kp_theta * theta + g.kd_theta * theta_dot +
                      g.kp_v * (v - v_des),
                  torque_limit);
}

// ---------------------------------------------------------------------------
// Dual-arm lift planning

inline constexpr int kNumLiftKeyframes = 3;

// Two modules latch onto opposite faces of a box. Module 0 (right, +x face)
// is anchored at end A; module 1 (left, -x face) at end B. The scene is
// symmetric under a half turn about the vertical axis through the box
// centre, and the box only moves along that axis.
struct LiftScene {
  Vec3 box_center = Vec3::Zero();  // start pose, world
  double box_size = 0.3048;
  std::array<Pose, 2> anchors;  // base latch frames, world
  // Box centre rise above the start pose at each keyframe.
  std::array<double, kNumLiftKeyframes> rise{0.0, 0.4, 0.3048};
  double duration = 10.0;
};

inline BaseEnd lift_base(int module) {
  return module == 0 ? BaseEnd::kEndA : BaseEnd::kEndB;
}

inline const char* lift_module_name(int module) {
  return module == 0 ? "right" : "left";
}

// Half turn about the vertical through `center`.
inline Pose half_turn_about(const Vec3& center) {
  return Pose::from_translation(center) * Pose::from_rotation(rot_z(M_PI)) *
         Pose::from_translation(-center);
}

// Anchors `gap` beyond each face and `height` above the box centre, with the
// base latch z axis pointing at the box.
inline LiftScene mirrored_lift_scene(const Vec3& box_center, double box_size,
                                     double gap, double height, double lift,
                                     double place, double duration) {
  LiftScene s;
  s.box_center = box_center;
  s.box_size = box_size;
  s.rise = {0.0, lift, place};
  s.duration = duration;
  Mat3 r;
  r.col(0) = Vec3::UnitZ();
  r.col(1) = Vec3::UnitY();
  r.col(2) = -Vec3::UnitX();
  Pose right;
  right.rotation = r;
  right.translation = box_center + Vec3(0.5 * box_size + gap, 0.0, height);
  s.anchors[0] = right;
  s.anchors[1] = half_turn_about(box_center) * right;
  return s;
}

inline Vec3 box_center_at(const LiftScene& s, int keyframe) {
  return s.box_center + Vec3(0.0, 0.0, s.rise[keyframe]);
}

// World pose of the latch frame on module's box face at a keyframe. The
// latch z axis points out of the face, x points up.
inline Pose face_pose(const LiftScene& s, int module, int keyframe) {
  Pose right;
  right.rotation.col(0) = Vec3::UnitZ();
  right.rotation.col(1) = -Vec3::UnitY();
  right.rotation.col(2) = Vec3::UnitX();
  right.translation = box_center_at(s, keyframe) + Vec3(0.5 * s.box_size, 0.0, 0.0);
  if (module == 0) return right;
  return half_turn_about(box_center_at(s, keyframe)) * right;
}

// Tight-tolerance settings so mirrored solves agree to far below 1e-6.
inline IkSettings plan_ik_settings(std::uint64_t seed) {
  IkSettings s;
  s.damping = 0.05;
  s.max_iters = 500;
  s.pos_tol = 1e-11;
  s.rot_tol = 1e-11;
  s.restarts = 16;
  s.seed = seed;
  s.stall_window = 50;
  return s;
}

// Keyframes at t = 0, duration/2 and duration: grasp at the box face, lifted,
// placed. The right module is solved first, each keyframe warm-started from
// the previous one. The left module is then solved at every keyframe from
// the mirror of the right module's solution; restart sequences are not
// mirrored bit-for-bit under rounding, so this keeps both on the same branch.
inline std::array<KeyframePlan, 2> plan_lift_keyframes(
    const LiftScene& scene, const ModuleParams& p, std::uint64_t seed) {
  if (!(scene.duration > 0.0)) throw InvalidParams("plan duration must be > 0");
  const IkSettings settings = plan_ik_settings(seed);
  std::array<KeyframePlan, 2> plans;
  for (int m = 0; m < 2; ++m) {
    plans[m].base = lift_base(m);
    // The straight configuration is its own mirror.
    std::optional<JointVector> warm = JointVector::Zero();
    for (int k = 0; k < kNumLiftKeyframes; ++k) {
      if (m == 1) warm = mirror_joints(plans[0].keyframes[k].q);
      Keyframe kf;
      kf.time = scene.duration * k / (kNumLiftKeyframes - 1);
      kf.target = scene.anchors[m].inverse() * face_pose(scene, m, k);
      const IkResult r = solve_ik(p, kf.target, plans[m].base, settings, warm);
      if (!r.converged) {
        throw PlanError("keyframe " + std::to_string(k + 1) + ": IK did not converge for the " +
                        lift_module_name(m) + " module (position error " +
                        std::to_string(r.final_pos_err) + " m)");
      }
      kf.q = r.q;
      warm = r.q;
      plans[m].keyframes.push_back(kf);
    }
  }
  return plans;
}

}  // namespace limms
