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

// Damped-least-squares inverse kinematics with random restarts.

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>

#include "limms/errors.hpp"
#include "limms/kinematics.hpp"

namespace limms {

struct IkSettings {
  double damping = 0.1;
  int max_iters = 200;
  double pos_tol = 1e-4;
  double rot_tol = 1e-3;
  double step_clamp = 0.3;
  int restarts = 16;
  std::uint64_t seed = 0;
  // Weight of the rotation-error rows relative to position (m per rad).
  double rot_weight = 1.0;
  // Abandon an attempt after this many iterations without a 1% error
  // improvement; 0 disables.
  int stall_window = 25;
};

struct IkResult {
  JointVector q = JointVector::Zero();
  bool converged = false;
  // Iterations spent in the attempt that produced `q`.
  int iters = 0;
  // Iterations over all attempts.
  int total_iters = 0;
  int attempts = 0;
  double final_pos_err = 0.0;
  double final_rot_err = 0.0;
};

inline void validate(const IkSettings& s) {
  if (!(s.damping > 0.0)) throw InvalidParams("IK damping must be > 0");
  if (!(s.pos_tol > 0.0) || !(s.rot_tol > 0.0)) {
    throw InvalidParams("IK tolerances must be > 0");
  }
  if (s.restarts < 1) throw InvalidParams("IK restarts must be >= 1");
  if (s.max_iters < 1) throw InvalidParams("IK max_iters must be >= 1");
  if (s.stall_window < 0) throw InvalidParams("IK stall_window must be >= 0");
  if (!(s.step_clamp > 0.0)) throw InvalidParams("IK step_clamp must be > 0");
  if (!(s.rot_weight > 0.0)) throw InvalidParams("IK rot_weight must be > 0");
}

// Position error and rotation-vector error of `current` relative to `target`,
// both in the base frame.
inline Vec6 pose_error(const Pose& target, const Pose& current) {
  Vec6 e;
  e.head<3>() = target.translation - current.translation;
  e.tail<3>() = log_so3(target.rotation * current.rotation.transpose());
  return e;
}

// One damped least-squares step: J^T (J J^T + lambda^2 I)^-1 e.
inline JointVector dls_step(const Jacobian& jac, const Vec6& e,
                            double damping) {
  const Mat6 jjt = jac * jac.transpose() + damping * damping * Mat6::Identity();
  return jac.transpose() * jjt.ldlt().solve(e);
}

// Uniform sample inside the joint limits.
template <class Rng>
JointVector random_joints(const ModuleParams& p, Rng& rng) {
  JointVector q;
  for (int j = 0; j < kNumJoints; ++j) {
    std::uniform_real_distribution<double> u(p.joint_limits[j].lo,
                                             p.joint_limits[j].hi);
    q[j] = u(rng);
  }
  return q;
}

inline JointVector clamp_to_limits(const ModuleParams& p, JointVector q) {
  for (int j = 0; j < kNumJoints; ++j) {
    q[j] = std::clamp(q[j], p.joint_limits[j].lo, p.joint_limits[j].hi);
  }
  return q;
}

namespace detail {

struct Attempt {
  JointVector q;
  int iters = 0;
  double pos_err = 0.0;
  double rot_err = 0.0;
  bool converged = false;
};

// Joints whose excluded arc is small enough that "past the limit" is better
// read as "around the other way".
inline bool wraps(const JointLimit& lim) { return lim.hi - lim.lo > 1.5 * M_PI; }

inline Attempt run_dls(const ModuleParams& p, const OrientedChain& chain,
                       const Pose& target, const IkSettings& s,
                       JointVector q) {
  constexpr int kMaxWraps = 4;
  Attempt a;
  std::array<int, kNumJoints> wrapped{};
  double best = std::numeric_limits<double>::infinity();
  int best_iter = 0;
  for (int it = 0;; ++it) {
    const FrameChain frames = evaluate_chain(chain, q);
    Vec6 e = pose_error(target, frames.back());
    a.pos_err = e.head<3>().norm();
    a.rot_err = e.tail<3>().norm();
    a.iters = it;
    if (a.pos_err < s.pos_tol && a.rot_err < s.rot_tol) {
      a.converged = true;
      break;
    }
    if (it == s.max_iters) break;
    const double err = a.pos_err + s.rot_weight * a.rot_err;
    if (err < 0.99 * best) {
      best = err;
      best_iter = it;
    } else if (s.stall_window > 0 && it - best_iter >= s.stall_window) {
      break;
    }

    Jacobian jac = jacobian_of(chain, frames);
    jac.bottomRows<3>() *= s.rot_weight;
    e.tail<3>() *= s.rot_weight;
    JointVector dq = dls_step(jac, e, s.damping);

    // Clamp-and-continue at the limits. A joint parked on a limit and still
    // pushed outward either wraps to its opposite limit (near-full-turn
    // joints) or drops out of the step so the others take up the error.
    bool dropped = false;
    for (int j = 0; j < kNumJoints; ++j) {
      const auto& lim = p.joint_limits[j];
      const bool pushing_out =
          (q[j] >= lim.hi && dq[j] > 0.0) || (q[j] <= lim.lo && dq[j] < 0.0);
      if (!pushing_out) continue;
      if (wraps(lim) && wrapped[j] < kMaxWraps) {
        q[j] = q[j] >= lim.hi ? lim.lo : lim.hi;
        ++wrapped[j];
        dq[j] = 0.0;
      } else {
        jac.col(j).setZero();
        dropped = true;
      }
    }
    if (dropped) dq = dls_step(jac, e, s.damping);
    for (int j = 0; j < kNumJoints; ++j) {
      dq[j] = std::clamp(dq[j], -s.step_clamp, s.step_clamp);
    }
    q = clamp_to_limits(p, q + dq);
  }
  a.q = q;
  return a;
}

}  // namespace detail

// Solves for joints placing the free-end latch frame at `target` (base
// frame). Starts from `q0` when given, then retries from uniformly random
// in-limit seeds up to `settings.restarts` times. Random seeds are drawn in
// end-A joint order and mirrored when anchoring at end B, so mirrored
// problems follow mirrored iterates.
inline IkResult solve_ik(const ModuleParams& p, const Pose& target,
                         BaseEnd base, const IkSettings& settings,
                         const std::optional<JointVector>& q0 = std::nullopt) {
  validate(settings);
  if (!target.is_valid_rotation(1e-8)) {
    throw InvalidParams("IK target rotation is not orthonormal");
  }
  const OrientedChain chain = oriented_chain(chain_geometry(p), base);
  std::mt19937_64 rng(settings.seed);
  auto random_seed = [&] {
    const JointVector q = random_joints(p, rng);
    return base == BaseEnd::kEndA ? q : clamp_to_limits(p, mirror_joints(q));
  };

  IkResult result;
  bool have_best = false;
  double best_score = 0.0;
  const int attempts = settings.restarts + (q0 ? 1 : 0);
  for (int i = 0; i < attempts; ++i) {
    const JointVector start =
        (i == 0 && q0) ? clamp_to_limits(p, *q0) : random_seed();
    const detail::Attempt a = detail::run_dls(p, chain, target, settings, start);
    result.total_iters += a.iters;
    result.attempts = i + 1;
    const double score = a.pos_err + a.rot_err;
    if (a.converged || !have_best || score < best_score) {
      have_best = true;
      best_score = score;
      result.q = a.q;
      result.iters = a.iters;
      result.final_pos_err = a.pos_err;
      result.final_rot_err = a.rot_err;
      result.converged = a.converged;
    }
    if (a.converged) break;
  }
  return result;
}

}  // namespace limms
