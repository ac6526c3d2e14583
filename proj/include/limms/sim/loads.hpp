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

// Static load model shared by the scenario engines: segment centres of mass,
// gravity holding torques, payload wrench torques and the diagonal
// composite-rigid-body inertia about each joint axis.

#pragma once

#include <array>

#include "limms/kinematics.hpp"

namespace limms::sim {

struct PointMass {
  Vec3 position;  // base frame
  double mass = 0.0;
  // Chain position of the last joint proximal to this mass; joints at chain
  // positions 0..owner move it.
  int owner = 0;
};

// Segment masses located on an evaluated chain, in chain order.
inline std::array<PointMass, kNumSegments> segment_masses(
    const ModuleParams& p, const FrameChain& frames, BaseEnd base) {
  std::array<PointMass, kNumSegments> out;
  for (int k = 0; k < kNumSegments; ++k) {
    const int s = base == BaseEnd::kEndA ? k : kNumSegments - 1 - k;
    const double len = p.link_lengths[s];
    const double from_near =
        base == BaseEnd::kEndA ? p.link_coms[s] : len - p.link_coms[s];
    const Vec3& a = frames[k].translation;
    const Vec3& b = frames[k + 1].translation;
    out[k].position = a + (from_near / len) * (b - a);
    out[k].mass = p.link_masses[s];
    out[k].owner = k;
  }
  return out;
}

// Torque each joint must supply to hold the distal masses against gravity.
// `up` is the unit vertical in the base frame and g its magnitude. Result in
// physical joint order.
inline JointVector gravity_torques(const ModuleParams& p, const JointVector& q,
                                   BaseEnd base, const Vec3& up, double g) {
  const OrientedChain chain = oriented_chain(chain_geometry(p), base);
  const FrameChain frames = detail::evaluate_chain(chain, q);
  const auto masses = segment_masses(p, frames, base);
  JointVector tau = JointVector::Zero();
  for (int k = 0; k < kNumJoints; ++k) {
    const Vec3 axis = joint_axis(chain, frames, k);
    double sum = 0.0;
    for (const PointMass& m : masses) {
      if (m.owner < k) continue;
      const Vec3 r = m.position - frames[k].translation;
      sum += axis.dot(r.cross(m.mass * g * up));
    }
    tau[chain.joint_index[k]] = sum;
  }
  return tau;
}

// Holding torque for an external wrench (force; moment about the free-end
// latch origin) applied to the free end: tau = -J^T w.
inline JointVector wrench_torques(const ModuleParams& p, const JointVector& q,
                                  BaseEnd base, const Vec6& wrench) {
  const OrientedChain chain = oriented_chain(chain_geometry(p), base);
  const FrameChain frames = detail::evaluate_chain(chain, q);
  return -jacobian_of(chain, frames).transpose() * wrench;
}

// Wrench from a share of a payload's weight hanging at `payload_com` (base
// frame), moved to the free-end latch origin.
inline Vec6 payload_wrench(const Pose& end, const Vec3& payload_com,
                           double mass, const Vec3& up, double g) {
  const Vec3 force = -mass * g * up;
  Vec6 w;
  w.head<3>() = force;
  w.tail<3>() = (payload_com - end.translation).cross(force);
  return w;
}

// Diagonal of the composite-rigid-body inertia about each joint axis, with
// segments and the payload share treated as point masses, plus armature.
inline JointVector effective_inertia(const ModuleParams& p,
                                     const JointVector& q, BaseEnd base,
                                     const Vec3& payload_com,
                                     double payload_mass) {
  const OrientedChain chain = oriented_chain(chain_geometry(p), base);
  const FrameChain frames = detail::evaluate_chain(chain, q);
  const auto masses = segment_masses(p, frames, base);
  JointVector inertia;
  for (int k = 0; k < kNumJoints; ++k) {
    const Vec3 axis = joint_axis(chain, frames, k);
    const Vec3& o = frames[k].translation;
    double sum = p.armature;
    for (const PointMass& m : masses) {
      if (m.owner < k) continue;
      sum += m.mass * axis.cross(m.position - o).squaredNorm();
    }
    sum += payload_mass * axis.cross(payload_com - o).squaredNorm();
    inertia[chain.joint_index[k]] = sum;
  }
  return inertia;
}

}  // namespace limms::sim
