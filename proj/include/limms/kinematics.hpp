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

// Dual-base forward kinematics. One chain evaluator serves both anchoring
// ends: anchoring at end B walks the same offsets in reverse order, inverted
// (which flips the sign of the X-offset twists), with the joint order reversed.
// See KINEMATICS.md for the frame layout.

#pragma once

#include <array>

#include "limms/errors.hpp"
#include "limms/model.hpp"
#include "limms/pose.hpp"

namespace limms {

// Joint angles indexed 1..6 from end A to end B (stored 0..5).
using JointVector = Eigen::Matrix<double, kNumJoints, 1>;
using Jacobian = Mat6;

enum class BaseEnd { kEndA, kEndB };

inline const char* to_string(BaseEnd b) {
  return b == BaseEnd::kEndA ? "A" : "B";
}

// Frames 1..6 (each after its joint rotation) and the free-end latch frame,
// all expressed in the base latch frame.
using FrameChain = std::array<Pose, kNumJoints + 1>;

inline void check_limits(const ModuleParams& p, const JointVector& q) {
  for (int j = 0; j < kNumJoints; ++j) {
    const auto& lim = p.joint_limits[j];
    if (!(q[j] >= lim.lo && q[j] <= lim.hi)) {
      throw JointLimitError(j + 1, q[j], lim.lo, lim.hi);
    }
  }
}

inline bool within_limits(const ModuleParams& p, const JointVector& q) {
  for (int j = 0; j < kNumJoints; ++j) {
    if (!(q[j] >= p.joint_limits[j].lo && q[j] <= p.joint_limits[j].hi)) {
      return false;
    }
  }
  return true;
}

// Reverses the joint order and negates each angle, which is what the
// reversed X-offsets require. fk(mirror_joints(q), B) == fk(q, A) on a
// symmetric module.
inline JointVector mirror_joints(const JointVector& q) {
  JointVector m;
  for (int j = 0; j < kNumJoints; ++j) m[j] = -q[kNumJoints - 1 - j];
  return m;
}

// The chain as seen from `base`, plus the map from chain position to the
// physical joint index.
struct OrientedChain {
  ChainGeometry geometry;
  std::array<int, kNumJoints> joint_index{};
};

inline OrientedChain oriented_chain(const ChainGeometry& g, BaseEnd base) {
  OrientedChain c;
  if (base == BaseEnd::kEndA) {
    c.geometry = g;
    for (int k = 0; k < kNumJoints; ++k) c.joint_index[k] = k;
    return c;
  }
  for (int i = 0; i <= kNumJoints; ++i) {
    c.geometry.offsets[i] = g.offsets[kNumJoints - i].inverse();
  }
  for (int k = 0; k < kNumJoints; ++k) {
    c.geometry.axes[k] = -g.axes[kNumJoints - 1 - k];
    c.joint_index[k] = kNumJoints - 1 - k;
  }
  return c;
}

namespace detail {

inline FrameChain evaluate_chain(const OrientedChain& c, const JointVector& q) {
  FrameChain frames;
  Pose t = c.geometry.offsets[0];
  for (int k = 0; k < kNumJoints; ++k) {
    const double angle = q[c.joint_index[k]];
    t = t * Pose::from_rotation(axis_angle(c.geometry.axes[k], angle));
    t.reorthonormalize();
    frames[k] = t;
    t = t * c.geometry.offsets[k + 1];
  }
  t.reorthonormalize();
  frames[kNumJoints] = t;
  return frames;
}

}  // namespace detail

// Frames evaluated without the joint-limit check. For internal callers that
// have already validated q (IK, planners, samplers).
inline FrameChain frame_chain_unchecked(const ModuleParams& p,
                                        const JointVector& q, BaseEnd base) {
  return detail::evaluate_chain(oriented_chain(chain_geometry(p), base), q);
}

inline FrameChain frame_chain(const ModuleParams& p, const JointVector& q,
                              BaseEnd base) {
  check_limits(p, q);
  return frame_chain_unchecked(p, q, base);
}

// Pose of the free-end latch frame in the base latch frame.
inline Pose fk(const ModuleParams& p, const JointVector& q, BaseEnd base) {
  return frame_chain(p, q, base).back();
}

// World-frame axis of each physical joint, given evaluated frames.
inline Vec3 joint_axis(const OrientedChain& c, const FrameChain& frames,
                       int chain_pos) {
  return frames[chain_pos].rotation * c.geometry.axes[chain_pos];
}

// Geometric Jacobian in the base frame, columns in physical joint order
// (1..6 from end A), rows (linear; angular) of the free-end latch origin.
inline Jacobian jacobian_of(const OrientedChain& c, const FrameChain& frames) {
  Jacobian jac;
  const Vec3& p_end = frames.back().translation;
  for (int k = 0; k < kNumJoints; ++k) {
    const Vec3 axis = joint_axis(c, frames, k);
    const int col = c.joint_index[k];
    jac.block<3, 1>(0, col) = axis.cross(p_end - frames[k].translation);
    jac.block<3, 1>(3, col) = axis;
  }
  return jac;
}

inline Jacobian jacobian(const ModuleParams& p, const JointVector& q,
                         BaseEnd base) {
  check_limits(p, q);
  const OrientedChain c = oriented_chain(chain_geometry(p), base);
  return jacobian_of(c, detail::evaluate_chain(c, q));
}

}  // namespace limms
