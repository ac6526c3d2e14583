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

// Physical description of one module: chain geometry, mass distribution and
// actuator envelope, plus the shipped presets and the reach calibration.

#pragma once

#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "limms/errors.hpp"
#include "limms/pose.hpp"

namespace limms {

inline constexpr int kNumJoints = 6;
inline constexpr int kNumSegments = 5;
inline constexpr double kGravity = 9.81;

enum class Topology {
  // Bilaterally symmetric chain: roll-pitch at each end, two tilted elbow
  // joints in the middle.
  kSymmetric,
  // Conventional yaw-pitch base, elbow, three-joint wrist (UR-style DH).
  kTraditional,
};

struct JointLimit {
  double lo = -2.9;
  double hi = 2.9;
};

struct ModuleParams {
  std::string preset = "limms";
  Topology topology = Topology::kSymmetric;

  // Symmetric: end-A hub, lower link, elbow block, upper link, end-B hub.
  // Traditional: base height, upper arm, forearm, wrist-2 and wrist-3 offsets.
  std::array<double, kNumSegments> link_lengths{};
  // Tilt of the elbow joint axes away from the link axis.
  double elbow_offset = M_PI / 4.0;
  // Fixed rotation about local X between joints 1 and 2 (reversed between 6
  // and 5).
  double joint2_offset_axis_angle = M_PI / 2.0;
  // Lateral shoulder offset, traditional topology only.
  double base_offset = 0.0;

  std::array<JointLimit, kNumJoints> joint_limits{};
  double torque_limit = 31.0;
  double velocity_limit = 2.0;
  double total_mass = 4.14;
  std::array<double, kNumSegments> link_masses{};
  // COM of each segment, measured along the segment from its end-A side.
  std::array<double, kNumSegments> link_coms{};
  double wheel_radius = 0.05;
  // Reflected rotor inertia added to every joint (kg m^2).
  double armature = 0.02;
};

struct RequirementsDefaults {
  double payload_mass = 2.0;
  double box_unit_length = 0.3048;
  double travel_distance = 50.0;
  double curb_height = 0.1524;
  double stair_rise = 0.1778;
  double stair_depth = 0.2794;
};

inline RequirementsDefaults requirements_defaults() { return {}; }

// Masses proportional to segment length with `end_lump` kg added at each end
// hub. The lumps sit at the outer ends of the hubs.
inline void distribute_mass(ModuleParams& p, double end_lump = 0.5) {
  const double total_len =
      std::accumulate(p.link_lengths.begin(), p.link_lengths.end(), 0.0);
  const double spread = p.total_mass - 2.0 * end_lump;
  for (int s = 0; s < kNumSegments; ++s) {
    const double len = p.link_lengths[s];
    const double m = spread * len / total_len;
    p.link_masses[s] = m;
    p.link_coms[s] = 0.5 * len;
  }
  // Fold the lumps into the hubs; end A's lump sits at offset 0, end B's at
  // the far end of its hub.
  const double m0 = p.link_masses[0];
  const double m4 = p.link_masses[4];
  p.link_coms[0] = (m0 * p.link_coms[0]) / (m0 + end_lump);
  p.link_coms[4] =
      (m4 * p.link_coms[4] + end_lump * p.link_lengths[4]) / (m4 + end_lump);
  p.link_masses[0] += end_lump;
  p.link_masses[4] += end_lump;
  // Absorb rounding so the masses sum to total_mass.
  const double sum =
      std::accumulate(p.link_masses.begin(), p.link_masses.end(), 0.0);
  p.link_masses[2] += p.total_mass - sum;
}

// The shipped module: 0.75 m fully stretched, 4.14 kg, 31 N m / 2 rad/s.
inline ModuleParams nominal_params() {
  ModuleParams p;
  p.preset = "limms";
  p.topology = Topology::kSymmetric;
  p.link_lengths = {0.07, 0.25, 0.11, 0.25, 0.07};
  distribute_mass(p);
  return p;
}

// UR-style comparator arm: yaw-pitch base with a lateral shoulder offset,
// elbow, three-joint wrist. Topology only, not the real UR5e dimensions.
inline ModuleParams traditional_params() {
  ModuleParams p;
  p.preset = "traditional";
  p.topology = Topology::kTraditional;
  p.link_lengths = {0.12, 0.28, 0.24, 0.08, 0.08};
  p.base_offset = 0.10;
  p.elbow_offset = 0.0;
  p.joint2_offset_axis_angle = M_PI / 2.0;
  distribute_mass(p);
  return p;
}

inline std::vector<std::string> preset_names() {
  return {"limms", "nominal", "traditional"};
}

inline ModuleParams preset_params(const std::string& name) {
  if (name == "limms" || name == "nominal") return nominal_params();
  if (name == "traditional") return traditional_params();
  throw InvalidParams("unknown preset '" + name + "'");
}

inline void validate(const ModuleParams& p) {
  for (int s = 0; s < kNumSegments; ++s) {
    if (!(p.link_lengths[s] > 0.0)) {
      throw InvalidParams("link_lengths[" + std::to_string(s) +
                          "] must be > 0");
    }
    if (p.link_masses[s] < 0.0) {
      throw InvalidParams("link_masses must be non-negative");
    }
  }
  if (p.topology == Topology::kSymmetric &&
      !(p.elbow_offset > 0.0 && p.elbow_offset < M_PI / 2.0)) {
    throw InvalidParams("elbow_offset must lie in (0, pi/2)");
  }
  if (!(p.torque_limit > 0.0) || !(p.velocity_limit > 0.0)) {
    throw InvalidParams("actuator limits must be > 0");
  }
  if (!(p.total_mass > 0.0) || !(p.wheel_radius > 0.0)) {
    throw InvalidParams("total_mass and wheel_radius must be > 0");
  }
  const double sum =
      std::accumulate(p.link_masses.begin(), p.link_masses.end(), 0.0);
  if (std::abs(sum - p.total_mass) > 1e-9) {
    throw InvalidParams("link masses sum to " + std::to_string(sum) +
                        ", expected total_mass " +
                        std::to_string(p.total_mass));
  }
  for (const auto& lim : p.joint_limits) {
    if (!(lim.lo < lim.hi)) throw InvalidParams("joint limit lo >= hi");
  }
}

// Ordered chain description:
//   T(q) = offsets[0] * R(axes[0], q1) * offsets[1] * ... * R(axes[5], q6)
//          * offsets[6]
// with every axis expressed in the frame it rotates.
struct ChainGeometry {
  std::array<Pose, kNumJoints + 1> offsets{};
  std::array<Vec3, kNumJoints> axes{};
};

namespace detail {

inline ChainGeometry symmetric_chain(const ModuleParams& p) {
  const auto& len = p.link_lengths;
  const double beta = p.joint2_offset_axis_angle;
  const double gamma = p.elbow_offset - beta;

  ChainGeometry g;
  g.axes.fill(Vec3::UnitZ());

  // End hub: translate along the roll axis, then twist about X so the pitch
  // axis is perpendicular to the chain.
  auto hub = [&](double length) {
    return Pose::from_translation(length * Vec3::UnitZ()) *
           Pose::from_rotation(rot_x(beta));
  };
  // Link: run along the chain direction, then tilt the elbow axis.
  const Vec3 d2(0.0, std::sin(beta), std::cos(beta));
  auto link = [&](double length) {
    return Pose::from_translation(length * d2) *
           Pose::from_rotation(rot_x(gamma));
  };
  // Elbow block: an involution (half turn about an axis orthogonal to the
  // chain direction) so the second half of the chain mirrors the first.
  const Vec3 d3 = rot_x(gamma).transpose() * d2;
  const Vec3 u = Vec3(0.0, -d3.z(), d3.y()).normalized();

  g.offsets[0] = Pose::identity();
  g.offsets[1] = hub(len[0]);
  g.offsets[2] = link(len[1]);
  g.offsets[3] = Pose::from_translation(len[2] * d3) *
                 Pose::from_rotation(axis_angle(u, M_PI));
  g.offsets[4] = link(len[3]).inverse();
  g.offsets[5] = hub(len[4]).inverse();
  g.offsets[6] = Pose::identity();
  return g;
}

inline Pose dh(double d, double a, double alpha) {
  return Pose::from_translation(Vec3(0.0, 0.0, d)) *
         Pose::from_translation(Vec3(a, 0.0, 0.0)) *
         Pose::from_rotation(rot_x(alpha));
}

inline ChainGeometry traditional_chain(const ModuleParams& p) {
  const auto& len = p.link_lengths;
  ChainGeometry g;
  g.axes.fill(Vec3::UnitZ());
  g.offsets[0] = Pose::identity();
  g.offsets[1] = dh(len[0], 0.0, M_PI / 2.0);
  g.offsets[2] = dh(0.0, -len[1], 0.0);
  g.offsets[3] = dh(0.0, -len[2], 0.0);
  g.offsets[4] = dh(p.base_offset, 0.0, M_PI / 2.0);
  g.offsets[5] = dh(len[3], 0.0, -M_PI / 2.0);
  g.offsets[6] = dh(len[4], 0.0, 0.0);
  return g;
}

}  // namespace detail

inline ChainGeometry chain_geometry(const ModuleParams& p) {
  return p.topology == Topology::kSymmetric ? detail::symmetric_chain(p)
                                            : detail::traditional_chain(p);
}

// Upper bound on the end distance from the base: sum of offset lengths.
inline double reach_bound(const ModuleParams& p) {
  const ChainGeometry g = chain_geometry(p);
  double sum = 0.0;
  for (const auto& off : g.offsets) sum += off.translation.norm();
  return sum;
}

// Samples for one joint: `n` evenly spaced values across the limits, plus the
// zero position when it lies inside them.
inline std::vector<double> joint_grid(const JointLimit& lim, int n) {
  std::vector<double> v;
  v.reserve(n + 1);
  for (int i = 0; i < n; ++i) {
    v.push_back(lim.lo + (lim.hi - lim.lo) * i / (n - 1));
  }
  if (lim.lo <= 0.0 && lim.hi >= 0.0 &&
      std::none_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) {
    v.push_back(0.0);
  }
  return v;
}

// Max over a joint grid of the free-end distance from base A.
inline double calibrate_reach(const ModuleParams& p, int samples_per_joint) {
  if (samples_per_joint < 3) {
    throw InvalidParams("samples_per_joint must be >= 3");
  }
  validate(p);
  const ChainGeometry g = chain_geometry(p);

  std::array<std::vector<Mat3>, kNumJoints> rot;
  for (int j = 0; j < kNumJoints; ++j) {
    for (double q : joint_grid(p.joint_limits[j], samples_per_joint)) {
      rot[j].push_back(axis_angle(g.axes[j], q));
    }
  }
  // Tail of the chain after the last joint, per last-joint sample.
  std::vector<Vec3> tail;
  for (const Mat3& r : rot[5]) tail.push_back(r * g.offsets[6].translation);

  double best_sq = 0.0;
  auto descend = [&](auto&& self, int j, const Pose& parent) -> void {
    if (j == kNumJoints - 1) {
      for (const Vec3& t : tail) {
        const Vec3 end = parent.rotation * t + parent.translation;
        best_sq = std::max(best_sq, end.squaredNorm());
      }
      return;
    }
    for (const Mat3& r : rot[j]) {
      self(self, j + 1, parent * Pose::from_rotation(r) * g.offsets[j + 1]);
    }
  };
  descend(descend, 0, g.offsets[0]);
  return std::sqrt(best_sq);
}

}  // namespace limms
